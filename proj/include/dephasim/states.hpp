#pragma once

#include <array>
#include <complex>

#include "dephasim/channel.hpp"

namespace dephasim {

// Polarization amplitudes of a single photon, |alpha|^2 + |beta|^2 = 1.
class SingleAmplitudes {
 public:
  SingleAmplitudes();  // balanced superposition (H+V)/sqrt(2)
  static SingleAmplitudes of(std::complex<double> alpha, std::complex<double> beta);
  // Real non-negative amplitudes from the H population |alpha|^2.
  static SingleAmplitudes from_population(double alpha_sq);

  std::complex<double> alpha() const noexcept { return alpha_; }
  std::complex<double> beta() const noexcept { return beta_; }

 private:
  SingleAmplitudes(std::complex<double> a, std::complex<double> b) : alpha_(a), beta_(b) {}
  std::complex<double> alpha_, beta_;
};

// Amplitudes of the pair state a|HH> + b|VV>, |a|^2 + |b|^2 = 1.
class PairAmplitudes {
 public:
  PairAmplitudes();  // Bell state amplitudes
  static PairAmplitudes of(std::complex<double> a, std::complex<double> b);
  static PairAmplitudes from_population(double a_sq);

  std::complex<double> a() const noexcept { return a_; }
  std::complex<double> b() const noexcept { return b_; }

 private:
  PairAmplitudes(std::complex<double> a, std::complex<double> b) : a_(a), b_(b) {}
  std::complex<double> a_, b_;
};

// Validated 2x2 density matrix: Hermitian and unit trace within 1e-12,
// eigenvalues >= -1e-10. Instances are immutable; every construction path
// validates, so downstream code can assume a physical state.
class DensityMatrix2 {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kEigenFloor = -1e-10;

  static DensityMatrix2 from_entries(const std::array<std::complex<double>, 4>& row_major);

  std::complex<double> at(int row, int col) const { return m_[row * 2 + col]; }
  const std::array<std::complex<double>, 4>& entries() const noexcept { return m_; }
  // Tr(rho^2); real for Hermitian input.
  double purity() const noexcept;

 private:
  friend DensityMatrix2 evolve_single(const SingleAmplitudes&, CorrelationValue);
  explicit DensityMatrix2(const std::array<std::complex<double>, 4>& m) : m_(m) {}
  std::array<std::complex<double>, 4> m_;
};

// Validated 4x4 density matrix in the (HH, HV, VH, VV) product basis.
class DensityMatrix4 {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kEigenFloor = -1e-10;

  static DensityMatrix4 from_entries(const std::array<std::complex<double>, 16>& row_major);

  std::complex<double> at(int row, int col) const { return m_[row * 4 + col]; }
  const std::array<std::complex<double>, 16>& entries() const noexcept { return m_; }
  double purity() const noexcept;

 private:
  friend DensityMatrix4 evolve_pair(const PairAmplitudes&, CorrelationValue);
  explicit DensityMatrix4(const std::array<std::complex<double>, 16>& m) : m_(m) {}
  std::array<std::complex<double>, 16> m_;
};

// Phase-damping channel on a single photon: populations untouched, coherence
// multiplied by the correlation. Returns
//   [[|alpha|^2, alpha conj(beta) conj(F)], [conj(alpha) beta F, |beta|^2]].
// Requires |F| <= 1 + 1e-12.
DensityMatrix2 evolve_single(const SingleAmplitudes& amps, CorrelationValue correlation);

// Channel on photon 1 of the pair state: corner matrix with diagonal
// (|a|^2, 0, 0, |b|^2) and corners a conj(b) conj(G) / conj(a) b G.
DensityMatrix4 evolve_pair(const PairAmplitudes& amps, CorrelationValue correlation);

}  // namespace dephasim
