#include "dephasim/correlation.hpp"

#include <cmath>
#include <vector>

#include "dephasim/errors.hpp"
#include "dephasim/kernels.hpp"

namespace dephasim {

namespace {

// sin(u)/u with the small-argument series to avoid 0/0.
inline double sinc_from(double s, double u) {
  if (std::abs(u) < 1e-8) return 1.0 - u * u / 6.0;
  return s / u;
}

}  // namespace

void closed_form_batch(const SpectrumEnvelope& spectrum, const ChannelParams& channel,
                       std::span<const double> lengths_m, std::span<CorrelationValue> out) {
  const std::size_t n = lengths_m.size();
  if (out.size() < n) fail(errc::invalid_config, "output span too small");
  for (double l : lengths_m)
    if (!(l >= 0.0)) fail(errc::invalid_config, "closed_form requires l >= 0");
  if (spectrum.kind() == SpectrumKind::Tabulated)
    fail(errc::tabulated_needs_quadrature, "tabulated spectra have no closed-form correlation");

  const auto& ops = kernels::active();
  const double rate = channel.delay_rate();  // s/m

  if (spectrum.kind() == SpectrumKind::White) {
    for (std::size_t i = 0; i < n; ++i) out[i] = lengths_m[i] == 0.0 ? 1.0 : 0.0;
    return;
  }

  if (spectrum.kind() == SpectrumKind::MultiDelta) {
    std::vector<double> phase(n), s(n), c(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
    for (const auto& peak : spectrum.peaks()) {
      const double omega_rate = peak.detuning * rate;
      for (std::size_t i = 0; i < n; ++i) phase[i] = omega_rate * lengths_m[i];
      ops.sincos(phase.data(), s.data(), c.data(), n);
      for (std::size_t i = 0; i < n; ++i)
        out[i] += CorrelationValue(peak.weight * c[i], peak.weight * s[i]);
    }
    return;
  }

  // Width families: envelope(u) x optional cos(sep*t/2) x carrier phase.
  const double width_rate = spectrum.width() * rate;
  std::vector<double> u(n), env(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = width_rate * lengths_m[i];

  switch (spectrum.kind()) {
    case SpectrumKind::Gaussian:
    case SpectrumKind::DoubleGaussian: {
      const double scale = spectrum.power() == 1 ? 0.25 : 0.125;
      std::vector<double> arg(n);
      for (std::size_t i = 0; i < n; ++i) arg[i] = -scale * u[i] * u[i];
      ops.exp(arg.data(), env.data(), n);
      break;
    }
    case SpectrumKind::Lorentzian:
    case SpectrumKind::DoubleLorentzian: {
      std::vector<double> arg(n);
      for (std::size_t i = 0; i < n; ++i) arg[i] = -u[i];
      ops.exp(arg.data(), env.data(), n);
      if (spectrum.power() == 2)
        for (std::size_t i = 0; i < n; ++i) env[i] *= 1.0 + u[i];
      break;
    }
    case SpectrumKind::Rectangular: {
      std::vector<double> s(n), c(n);
      ops.sincos(u.data(), s.data(), c.data(), n);
      for (std::size_t i = 0; i < n; ++i) env[i] = sinc_from(s[i], u[i]);
      break;
    }
    default:
      fail(errc::invalid_config, "unreachable spectrum kind");
  }

  if (spectrum.kind() == SpectrumKind::DoubleGaussian ||
      spectrum.kind() == SpectrumKind::DoubleLorentzian) {
    const double half_sep_rate = 0.5 * spectrum.separation() * rate;
    std::vector<double> phase(n), s(n), c(n);
    for (std::size_t i = 0; i < n; ++i) phase[i] = half_sep_rate * lengths_m[i];
    ops.sincos(phase.data(), s.data(), c.data(), n);
    for (std::size_t i = 0; i < n; ++i) env[i] *= c[i];
  }

  const double center = spectrum.center_detuning();
  if (center != 0.0) {
    std::vector<double> phase(n), s(n), c(n);
    const double center_rate = center * rate;
    for (std::size_t i = 0; i < n; ++i) phase[i] = center_rate * lengths_m[i];
    ops.sincos(phase.data(), s.data(), c.data(), n);
    for (std::size_t i = 0; i < n; ++i) out[i] = CorrelationValue(env[i] * c[i], env[i] * s[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = env[i];
  }
}

CorrelationValue closed_form(const SpectrumEnvelope& spectrum, const ChannelParams& channel,
                             double length_m) {
  CorrelationValue value;
  closed_form_batch(spectrum, channel, std::span<const double>(&length_m, 1),
                    std::span<CorrelationValue>(&value, 1));
  return value;
}

}  // namespace dephasim
