#include "dephasim/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dephasim/errors.hpp"

namespace dephasim {
namespace {

using C4 = std::array<std::complex<double>, 16>;
using Cx = std::complex<double>;

constexpr double kOffDiagonalFactor = 1e-14;  // convergence: off-norm <= 1e-14 * ||M||
constexpr int kMaxSweeps = 100;
constexpr double kNegativeEigenLimit = -1e-9;  // beyond this is not numerical dust
// Rank-deficiency noise floor for the concurrence spectrum: matrix products
// carry O(eps) absolute error, which the square root would amplify to ~1e-8.
// Eigenvalues of A below this floor are treated as exact zeros.
constexpr double kRankFloor = 1e-13;

double frobenius(const C4& m) {
  double s = 0.0;
  for (const auto& e : m) s += std::norm(e);
  return std::sqrt(s);
}

double off_diagonal_norm(const C4& m) {
  double s = 0.0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (r != c) s += std::norm(m[r * 4 + c]);
  return std::sqrt(s);
}

struct JacobiResult {
  std::array<double, 4> values;  // non-increasing
  C4 vectors;                    // columns are the eigenvectors, matching order
};

JacobiResult jacobi_hermitian_4(const C4& input) {
  C4 a;
  const double hermitian_tol = 1e-10 * std::max(1.0, frobenius(input));
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const Cx v = input[r * 4 + c];
      const Cx w = std::conj(input[c * 4 + r]);
      if (std::abs(v - w) > hermitian_tol)
        fail(errc::invalid_density_matrix, "matrix is not Hermitian within 1e-10");
      a[r * 4 + c] = 0.5 * (v + w);
    }
    a[r * 4 + r] = a[r * 4 + r].real();
  }

  C4 v{};
  for (int i = 0; i < 4; ++i) v[i * 4 + i] = 1.0;

  const double threshold = kOffDiagonalFactor * frobenius(a);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= threshold) {
      JacobiResult result;
      std::array<int, 4> order{0, 1, 2, 3};
      std::array<double, 4> diag;
      for (int i = 0; i < 4; ++i) diag[i] = a[i * 4 + i].real();
      std::sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] > diag[y]; });
      for (int i = 0; i < 4; ++i) {
        result.values[i] = diag[order[i]];
        for (int r = 0; r < 4; ++r) result.vectors[r * 4 + i] = v[r * 4 + order[i]];
      }
      return result;
    }
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        const Cx g = a[p * 4 + q];
        const double mag = std::abs(g);
        if (mag == 0.0) continue;
        const Cx phase = g / mag;
        const double tau = (a[q * 4 + q].real() - a[p * 4 + p].real()) / (2.0 * mag);
        const double sign = tau >= 0.0 ? 1.0 : -1.0;
        const double t = -sign / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Cx se_p = s * phase;             // s * e^{i phi}
        const Cx se_m = s * std::conj(phase);  // s * e^{-i phi}

        // A <- U^H A U with U = [[c, -s e^{i phi}], [s e^{-i phi}, c]] on (p, q)
        for (int r = 0; r < 4; ++r) {
          const Cx arp = a[r * 4 + p], arq = a[r * 4 + q];
          a[r * 4 + p] = arp * c + arq * se_m;
          a[r * 4 + q] = arq * c - arp * se_p;
        }
        for (int r = 0; r < 4; ++r) {
          const Cx apr = a[p * 4 + r], aqr = a[q * 4 + r];
          a[p * 4 + r] = apr * c + aqr * se_p;
          a[q * 4 + r] = aqr * c - apr * se_m;
        }
        a[p * 4 + q] = 0.0;
        a[q * 4 + p] = 0.0;
        a[p * 4 + p] = a[p * 4 + p].real();
        a[q * 4 + q] = a[q * 4 + q].real();

        for (int r = 0; r < 4; ++r) {
          const Cx vrp = v[r * 4 + p], vrq = v[r * 4 + q];
          v[r * 4 + p] = vrp * c + vrq * se_m;
          v[r * 4 + q] = vrq * c - vrp * se_p;
        }
      }
    }
  }
  fail(errc::eigen_not_converged, "Jacobi iteration did not converge in 100 sweeps");
}

C4 matmul(const C4& x, const C4& y) {
  C4 z{};
  for (int r = 0; r < 4; ++r)
    for (int k = 0; k < 4; ++k) {
      const Cx xv = x[r * 4 + k];
      if (xv == 0.0) continue;
      for (int c = 0; c < 4; ++c) z[r * 4 + c] += xv * y[k * 4 + c];
    }
  return z;
}

// (sigma_y x sigma_y) conj(M) (sigma_y x sigma_y) via the index/sign identity;
// sigma_y = [[0, -i], [i, 0]].
C4 spin_flip_conj(const C4& m) {
  constexpr double sign[4] = {-1.0, 1.0, 1.0, -1.0};
  C4 out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      out[r * 4 + c] = sign[r] * sign[c] * std::conj(m[(3 - r) * 4 + (3 - c)]);
  return out;
}

}  // namespace

EigenSpectrum4 eigvals_hermitian_4(const std::array<std::complex<double>, 16>& m) {
  return EigenSpectrum4{jacobi_hermitian_4(m).values};
}

double linear_entropy_2(const DensityMatrix2& rho) {
  const double value = 2.0 * (1.0 - rho.purity());
  if (value < -1e-9 || value > 1.0 + 1e-9)
    fail(errc::invalid_density_matrix, "linear entropy outside [0, 1]");
  return std::clamp(value, 0.0, 1.0);
}

double linear_entropy_4(const DensityMatrix4& rho) {
  const double value = (4.0 / 3.0) * (1.0 - rho.purity());
  if (value < -1e-9 || value > 1.0 + 1e-9)
    fail(errc::invalid_density_matrix, "linear entropy outside [0, 1]");
  return std::clamp(value, 0.0, 1.0);
}

double concurrence(const DensityMatrix4& rho) {
  const C4& m = rho.entries();
  const JacobiResult eig = jacobi_hermitian_4(m);
  if (eig.values.back() < kNegativeEigenLimit)
    fail(errc::invalid_density_matrix, "density matrix has a negative eigenvalue");

  // sqrt(rho) = V sqrt(Lambda) V^H
  C4 sqrt_rho{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      Cx acc = 0.0;
      for (int k = 0; k < 4; ++k) {
        const double root = std::sqrt(std::max(0.0, eig.values[k]));
        acc += eig.vectors[r * 4 + k] * root * std::conj(eig.vectors[c * 4 + k]);
      }
      sqrt_rho[r * 4 + c] = acc;
    }

  const C4 flipped = spin_flip_conj(m);
  const C4 a = matmul(matmul(sqrt_rho, flipped), sqrt_rho);
  const JacobiResult spectrum = jacobi_hermitian_4(a);
  if (spectrum.values.back() < kNegativeEigenLimit)
    fail(errc::invalid_density_matrix, "concurrence spectrum has a negative eigenvalue");

  const double floor = kRankFloor * std::max(1.0, spectrum.values.front());
  double c = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double lam = spectrum.values[i] <= floor ? 0.0 : spectrum.values[i];
    c += (i == 0 ? 1.0 : -1.0) * std::sqrt(lam);
  }
  return std::max(0.0, c);
}

double concurrence_closed(const PairAmplitudes& amps, CorrelationValue correlation) {
  if (!(std::abs(correlation) <= 1.0 + 1e-12))
    fail(errc::correlation_out_of_range, "correlation modulus exceeds 1");
  return 2.0 * std::abs(amps.a()) * std::abs(amps.b()) * std::abs(correlation);
}

}  // namespace dephasim
