#pragma once

#include <cstddef>
#include <string_view>

namespace dephasim::kernels {

// Batch math kernels behind the numeric inner loops: spectrum density
// evaluation, oscillatory quadrature sums, and closed-form curve sweeps.
//
// Two implementations ship: a scalar reference built on libm, and an
// AVX2+FMA variant selected at runtime when the CPU supports it. The SIMD
// transcendentals may differ from libm by a couple of ulp; both variants are
// deterministic for a fixed binary and machine, and results do not depend on
// where an element sits inside a batch.
struct Ops {
  const char* name;

  // y[i] = exp(x[i]). Inputs below about -745 produce +0; above about 709.8
  // produce +inf; NaN propagates.
  void (*exp)(const double* x, double* y, std::size_t n);

  // s[i] = sin(x[i]), c[i] = cos(x[i]). |x| <= 1e6 takes the vector path;
  // larger magnitudes fall back to libm per lane.
  void (*sincos)(const double* x, double* s, double* c, std::size_t n);

  // sum_i a[i]*b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);

  // sum_i a[i]*b[i]*c[i]
  double (*dot3)(const double* a, const double* b, const double* c, std::size_t n);
};

const Ops& scalar_ops() noexcept;

bool avx2_supported() noexcept;
// Null when this build or CPU lacks AVX2.
const Ops* avx2_ops_or_null() noexcept;

// Active table: AVX2 when available, else scalar. The environment variable
// DEPHASIM_KERNEL=scalar|avx2|auto overrides the choice (read once, at first
// use). force() is the programmatic override used by the equivalence tests.
const Ops& active() noexcept;
void force(std::string_view name);  // "scalar", "avx2" or "auto"; throws on bad name

}  // namespace dephasim::kernels
