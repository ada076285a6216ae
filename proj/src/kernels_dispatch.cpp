#include <atomic>
#include <cstdlib>
#include <string>

#include "dephasim/errors.hpp"
#include "dephasim/kernels.hpp"

namespace dephasim::kernels {

#if DEPHASIM_HAVE_AVX2
const Ops* avx2_ops_impl() noexcept;  // defined in kernels_avx2.cpp
#endif

bool avx2_supported() noexcept {
#if DEPHASIM_HAVE_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops* avx2_ops_or_null() noexcept {
#if DEPHASIM_HAVE_AVX2
  return avx2_supported() ? avx2_ops_impl() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const Ops* pick(std::string_view name) {
  if (name == "scalar") return &scalar_ops();
  if (name == "avx2") {
    const Ops* ops = avx2_ops_or_null();
    if (!ops) fail(errc::invalid_config, "AVX2 kernels not available on this build/CPU");
    return ops;
  }
  if (name == "auto" || name.empty()) {
    const Ops* ops = avx2_ops_or_null();
    return ops ? ops : &scalar_ops();
  }
  fail(errc::invalid_config, "unknown kernel name: " + std::string(name));
}

std::atomic<const Ops*>& active_slot() {
  static std::atomic<const Ops*> slot{[] {
    const char* env = std::getenv("DEPHASIM_KERNEL");
    return pick(env ? std::string_view(env) : std::string_view("auto"));
  }()};
  return slot;
}

}  // namespace

const Ops& active() noexcept { return *active_slot().load(std::memory_order_relaxed); }

void force(std::string_view name) { active_slot().store(pick(name), std::memory_order_relaxed); }

}  // namespace dephasim::kernels
