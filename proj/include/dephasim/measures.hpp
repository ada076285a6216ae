#pragma once

#include <array>
#include <complex>

#include "dephasim/states.hpp"

namespace dephasim {

// Eigenvalues of a 4x4 Hermitian matrix, sorted non-increasing.
struct EigenSpectrum4 {
  std::array<double, 4> values{};
  // Density-matrix usage: numerical dust below zero clamped away.
  std::array<double, 4> clamped() const noexcept {
    std::array<double, 4> v = values;
    for (double& x : v)
      if (x < 0.0) x = 0.0;
    return v;
  }
};

// Cyclic complex Jacobi rotations; iterates until the off-diagonal Frobenius
// norm falls below 1e-14 * ||M||. Input must be Hermitian within 1e-10 (it is
// symmetrized internally). Throws eigen_not_converged after 100 sweeps.
EigenSpectrum4 eigvals_hermitian_4(const std::array<std::complex<double>, 16>& m);

// Normalized linear entropy 2[1 - Tr(rho^2)]: 0 for pure states, 1 for the
// maximally mixed qubit.
double linear_entropy_2(const DensityMatrix2& rho);

// Two-qubit normalized linear entropy (4/3)[1 - Tr(rho^2)].
double linear_entropy_4(const DensityMatrix4& rho);

// Wootters concurrence via the eigenvalue route: with
// rho_tilde = (sigma_y x sigma_y) conj(rho) (sigma_y x sigma_y), forms the
// Hermitian PSD matrix A = sqrt(rho) rho_tilde sqrt(rho) (same spectrum as
// rho*rho_tilde), clamps its eigenvalues to >= 0 and returns
// max{0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)}.
double concurrence(const DensityMatrix4& rho);

// Closed form for the corner states this channel produces: 2|a||b||G|.
double concurrence_closed(const PairAmplitudes& amps, CorrelationValue correlation);

}  // namespace dephasim
