#include <cmath>
#include <cstddef>

#include "dephasim/kernels.hpp"

namespace dephasim::kernels {
namespace {

void exp_scalar(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::exp(x[i]);
}

void sincos_scalar(const double* x, double* s, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = std::sin(x[i]);
    c[i] = std::cos(x[i]);
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double dot3_scalar(const double* a, const double* b, const double* c, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i] * c[i];
  return acc;
}

}  // namespace

const Ops& scalar_ops() noexcept {
  static const Ops ops{"scalar", &exp_scalar, &sincos_scalar, &dot_scalar, &dot3_scalar};
  return ops;
}

}  // namespace dephasim::kernels
