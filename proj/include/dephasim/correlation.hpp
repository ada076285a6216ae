#pragma once

#include <span>

#include "dephasim/channel.hpp"
#include "dephasim/spectrum.hpp"

namespace dephasim {

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr double kMinQuadTol = 1e-13;
inline constexpr double kMaxQuadTol = 1e-6;

// Closed-form correlation F(l) = integral F(nu) exp(i nu dn l / c) dnu,
// including the carrier phase exp(i*center*dn*l/c) relative to omega_ref.
// Per family (u = dn*dw*l/c, p = power):
//   White            indicator: 1 at l = 0, else 0 (Markovian idealization)
//   Gaussian         exp(-(u/2)^2)            p=2: exp(-u^2/8)
//   Lorentzian       exp(-u)                  p=2: (1+u)*exp(-u)
//   Rectangular      sinc(u)
//   MultiDelta       sum_j w_j exp(i nu_j dn l / c)
//   Double*          single-peak envelope times cos(dn*sep*l/(2c))
// Throws tabulated_needs_quadrature for Tabulated; requires l >= 0.
CorrelationValue closed_form(const SpectrumEnvelope& spectrum, const ChannelParams& channel,
                             double length_m);

// Same values over a whole length grid; the batch path runs on the active
// SIMD kernels.
void closed_form_batch(const SpectrumEnvelope& spectrum, const ChannelParams& channel,
                       std::span<const double> lengths_m, std::span<CorrelationValue> out);

// Independent numerical oracle for the same Fourier integral.
//   - compact / fast-decay families: adaptive Gauss-Kronrod (G7/K15) over the
//     truncated support, panels capped at half an oscillation period when the
//     phase span is large;
//   - Lorentzian-type families: Ooura-Mori double-exponential Fourier
//     quadrature (plain truncation would lose O(1/L) tail mass);
//   - MultiDelta: the exact finite sum;
//   - Tabulated: Filon-type rule, exact per linear segment.
// Negative lengths are allowed (the transform extends naturally). Convergence
// target is rel_tol relative to the correlation scale max(|F|, 1); throws
// NotConvergedError with the best estimate when the budget is exhausted,
// white_is_singular for White inputs.
CorrelationValue quadrature(const SpectrumEnvelope& spectrum, const ChannelParams& channel,
                            double length_m, double rel_tol = kDefaultQuadTol);

namespace detail {
// Test hook: panel budget for the Gauss-Kronrod engine.
struct QuadratureLimits {
  int max_panels = 4000;
};
CorrelationValue quadrature_with_limits(const SpectrumEnvelope& spectrum,
                                        const ChannelParams& channel, double length_m,
                                        double rel_tol, const QuadratureLimits& limits);
}  // namespace detail

}  // namespace dephasim
