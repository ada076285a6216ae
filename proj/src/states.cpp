#include "dephasim/states.hpp"

#include <cmath>

#include "dephasim/errors.hpp"
#include "dephasim/measures.hpp"

namespace dephasim {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kRootHalf = 0.70710678118654752440;

void require_unit_norm(std::complex<double> a, std::complex<double> b, const char* what) {
  const double norm = std::norm(a) + std::norm(b);
  if (std::abs(norm - 1.0) > kNormTol)
    fail(errc::not_normalized, std::string(what) + " amplitudes must satisfy |a|^2+|b|^2=1");
}

void require_population(double p) {
  if (!(p >= 0.0 && p <= 1.0)) fail(errc::not_normalized, "population must lie in [0, 1]");
}

void require_unit_correlation(CorrelationValue f) {
  if (!(std::abs(f) <= 1.0 + 1e-12))
    fail(errc::correlation_out_of_range, "correlation modulus exceeds 1");
}

}  // namespace

SingleAmplitudes::SingleAmplitudes() : alpha_(kRootHalf), beta_(kRootHalf) {}

SingleAmplitudes SingleAmplitudes::of(std::complex<double> alpha, std::complex<double> beta) {
  require_unit_norm(alpha, beta, "single-photon");
  return SingleAmplitudes(alpha, beta);
}

SingleAmplitudes SingleAmplitudes::from_population(double alpha_sq) {
  require_population(alpha_sq);
  return SingleAmplitudes(std::sqrt(alpha_sq), std::sqrt(1.0 - alpha_sq));
}

PairAmplitudes::PairAmplitudes() : a_(kRootHalf), b_(kRootHalf) {}

PairAmplitudes PairAmplitudes::of(std::complex<double> a, std::complex<double> b) {
  require_unit_norm(a, b, "pair");
  return PairAmplitudes(a, b);
}

PairAmplitudes PairAmplitudes::from_population(double a_sq) {
  require_population(a_sq);
  return PairAmplitudes(std::sqrt(a_sq), std::sqrt(1.0 - a_sq));
}

DensityMatrix2 DensityMatrix2::from_entries(const std::array<std::complex<double>, 4>& m) {
  using C = std::complex<double>;
  if (std::abs(m[0].imag()) > kHermitianTol || std::abs(m[3].imag()) > kHermitianTol ||
      std::abs(m[1] - std::conj(m[2])) > kHermitianTol)
    fail(errc::invalid_density_matrix, "2x2 matrix not Hermitian within 1e-12");
  if (std::abs(m[0].real() + m[3].real() - 1.0) > kTraceTol)
    fail(errc::invalid_density_matrix, "2x2 matrix trace differs from 1");
  std::array<C, 4> h = {C(m[0].real(), 0.0), 0.5 * (m[1] + std::conj(m[2])),
                        0.5 * (m[2] + std::conj(m[1])), C(m[3].real(), 0.0)};
  // closed-form eigenvalues of the symmetrized matrix
  const double half_tr = 0.5 * (h[0].real() + h[3].real());
  const double det = h[0].real() * h[3].real() - std::norm(h[1]);
  const double disc = std::sqrt(std::max(0.0, half_tr * half_tr - det));
  if (half_tr - disc < kEigenFloor)
    fail(errc::invalid_density_matrix, "2x2 matrix has a negative eigenvalue");
  return DensityMatrix2(h);
}

double DensityMatrix2::purity() const noexcept {
  double p = 0.0;
  for (const auto& e : m_) p += std::norm(e);
  return p;
}

DensityMatrix4 DensityMatrix4::from_entries(const std::array<std::complex<double>, 16>& m) {
  std::array<std::complex<double>, 16> h;
  double trace = 0.0;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (std::abs(m[r * 4 + c] - std::conj(m[c * 4 + r])) > kHermitianTol)
        fail(errc::invalid_density_matrix, "4x4 matrix not Hermitian within 1e-12");
      h[r * 4 + c] = 0.5 * (m[r * 4 + c] + std::conj(m[c * 4 + r]));
    }
    h[r * 4 + r] = h[r * 4 + r].real();
    trace += h[r * 4 + r].real();
  }
  if (std::abs(trace - 1.0) > kTraceTol)
    fail(errc::invalid_density_matrix, "4x4 matrix trace differs from 1");
  const EigenSpectrum4 spectrum = eigvals_hermitian_4(h);
  if (spectrum.values.back() < kEigenFloor)
    fail(errc::invalid_density_matrix, "4x4 matrix has a negative eigenvalue");
  return DensityMatrix4(h);
}

double DensityMatrix4::purity() const noexcept {
  double p = 0.0;
  for (const auto& e : m_) p += std::norm(e);
  return p;
}

DensityMatrix2 evolve_single(const SingleAmplitudes& amps, CorrelationValue correlation) {
  require_unit_correlation(correlation);
  const auto alpha = amps.alpha();
  const auto beta = amps.beta();
  return DensityMatrix2({std::norm(alpha), alpha * std::conj(beta) * std::conj(correlation),
                         std::conj(alpha) * beta * correlation, std::norm(beta)});
}

DensityMatrix4 evolve_pair(const PairAmplitudes& amps, CorrelationValue correlation) {
  require_unit_correlation(correlation);
  const auto a = amps.a();
  const auto b = amps.b();
  std::array<std::complex<double>, 16> m{};
  m[0] = std::norm(a);
  m[15] = std::norm(b);
  m[3] = a * std::conj(b) * std::conj(correlation);
  m[12] = std::conj(a) * b * correlation;
  return DensityMatrix4(m);
}

}  // namespace dephasim
