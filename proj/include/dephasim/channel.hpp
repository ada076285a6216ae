#pragma once

#include <complex>

#include "dephasim/errors.hpp"
#include "dephasim/spectrum.hpp"

namespace dephasim {

// Complex correlation factor multiplying the density-matrix coherence after
// crystal length l; |value| <= 1 for any normalized spectrum.
using CorrelationValue = std::complex<double>;

// Birefringent phase-damping channel: group-index difference dn = n_V - n_H
// over a crystal of length l delays one polarization by t = dn*l/c. All
// plotted quantities depend only on the product k = dn*dw/c, so the channel
// can be configured either from dn directly or from k plus a spectrum width.
class ChannelParams {
 public:
  static constexpr double kSpeedOfLight = 299792458.0;  // m/s

  static ChannelParams from_delta_n(double delta_n) {
    if (!(delta_n > 0.0)) fail(errc::invalid_config, "delta_n must be positive (n_V > n_H)");
    return ChannelParams(delta_n);
  }

  // k in 1/m; width_scale in rad/s (the spectrum's width parameter).
  static ChannelParams from_k(double k_per_meter, double width_scale) {
    if (!(k_per_meter > 0.0)) fail(errc::invalid_config, "k must be positive");
    if (!(width_scale > 0.0)) fail(errc::invalid_config, "width scale must be positive");
    return ChannelParams(k_per_meter * kSpeedOfLight / width_scale);
  }

  double delta_n() const noexcept { return delta_n_; }

  // Differential delay per unit length (s/m): t(l) = delay_rate() * l.
  double delay_rate() const noexcept { return delta_n_ / kSpeedOfLight; }

  // The composite dn*dw/c this channel realizes for a given spectrum.
  double k_for(const SpectrumEnvelope& spectrum) const {
    return delta_n_ * spectrum.width_scale() / kSpeedOfLight;
  }

 private:
  explicit ChannelParams(double delta_n) : delta_n_(delta_n) {}
  double delta_n_;
};

}  // namespace dephasim
