#include "dephasim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dephasim/errors.hpp"

namespace dephasim {

namespace {

constexpr double kImagRealGate = 1e-9;  // |Im| above this: no sign-crossing detection

void validate(const SweepConfig& cfg) {
  if (!(cfg.grid.start >= 0.0)) fail(errc::invalid_config, "grid start must be >= 0");
  if (!(cfg.grid.stop > cfg.grid.start)) fail(errc::invalid_config, "grid stop must exceed start");
  if (cfg.grid.count < 2) fail(errc::invalid_config, "grid needs at least two points");
  if (!(cfg.quad_tol >= kMinQuadTol && cfg.quad_tol <= kMaxQuadTol))
    fail(errc::invalid_config, "quadrature tolerance outside [1e-13, 1e-6]");
  if (cfg.spectrum.kind() == SpectrumKind::Tabulated && cfg.mode != CorrelationMode::Quadrature)
    fail(errc::invalid_config, "tabulated spectra support only quadrature mode");
}

std::vector<CorrelationValue> correlations(const SweepConfig& cfg,
                                           const std::vector<double>& lengths) {
  const std::size_t n = lengths.size();
  std::vector<CorrelationValue> values(n);
  if (cfg.mode == CorrelationMode::ClosedForm || cfg.mode == CorrelationMode::Both)
    closed_form_batch(cfg.spectrum, cfg.channel, lengths, values);
  if (cfg.mode == CorrelationMode::Quadrature)
    for (std::size_t i = 0; i < n; ++i)
      values[i] = quadrature(cfg.spectrum, cfg.channel, lengths[i], cfg.quad_tol);
  if (cfg.mode == CorrelationMode::Both) {
    double worst = 0.0;
    double worst_l = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const CorrelationValue q = quadrature(cfg.spectrum, cfg.channel, lengths[i], cfg.quad_tol);
      const double dev = std::abs(values[i] - q);
      if (dev > worst) {
        worst = dev;
        worst_l = lengths[i];
      }
    }
    if (worst > kOracleAgreement)
      throw OracleMismatchError(worst_l, worst,
                                "closed form and quadrature disagree beyond 1e-7");
  }
  return values;
}

// Topographic prominence of the local minimum at index i: the lower of the
// highest barriers separating it from lower ground (or the grid edge).
double prominence_at(const std::vector<double>& s, std::size_t i) {
  double left = s[i];
  for (std::size_t j = i; j-- > 0;) {
    left = std::max(left, s[j]);
    if (s[j] < s[i]) break;
  }
  double right = s[i];
  for (std::size_t j = i + 1; j < s.size(); ++j) {
    right = std::max(right, s[j]);
    if (s[j] < s[i]) break;
  }
  return std::min(left, right) - s[i];
}

std::vector<SweepEvent> detect_events(const SweepConfig& cfg, const std::vector<double>& lengths,
                                      const std::vector<CorrelationValue>& corr,
                                      const std::vector<double>& entropy, bool pair,
                                      double pair_scale) {
  const std::size_t n = lengths.size();
  const EventKind zero_kind = pair ? EventKind::Disentangled : EventKind::CoherenceZero;
  std::vector<SweepEvent> events;

  // De-carriered correlation: real for every symmetric family, which makes
  // zero crossings visible as sign changes.
  const double carrier_rate = cfg.spectrum.carrier_detuning() * cfg.channel.delay_rate();
  std::vector<double> re(n), im(n), amp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phi = carrier_rate * lengths[i];
    const CorrelationValue hat = corr[i] * CorrelationValue(std::cos(phi), -std::sin(phi));
    re[i] = hat.real();
    im[i] = hat.imag();
    amp[i] = (pair ? pair_scale : 1.0) * std::abs(corr[i]);
  }

  bool in_zero_run = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (amp[i] < kZeroThreshold) {
      if (!in_zero_run) events.push_back({zero_kind, lengths[i], amp[i]});
      in_zero_run = true;
    } else {
      in_zero_run = false;
    }
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (amp[i] < kZeroThreshold || amp[i + 1] < kZeroThreshold) continue;
    if (std::abs(im[i]) > kImagRealGate || std::abs(im[i + 1]) > kImagRealGate) continue;
    if (!(re[i] * re[i + 1] < 0.0)) continue;
    const double frac = re[i] / (re[i] - re[i + 1]);
    const double l = lengths[i] + frac * (lengths[i + 1] - lengths[i]);
    const double a = (pair ? pair_scale : 1.0) *
                     std::abs(CorrelationValue((1.0 - frac) * re[i] + frac * re[i + 1],
                                               (1.0 - frac) * im[i] + frac * im[i + 1]));
    events.push_back({zero_kind, l, a});
  }

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(entropy[i] < entropy[i - 1] && entropy[i] < entropy[i + 1])) continue;
    if (prominence_at(entropy, i) < kRevivalProminence) continue;
    events.push_back({EventKind::Revival, lengths[i], entropy[i]});
  }

  std::sort(events.begin(), events.end(), [](const SweepEvent& a, const SweepEvent& b) {
    if (a.length != b.length) return a.length < b.length;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
  return events;
}

}  // namespace

const char* to_string(CorrelationMode mode) noexcept {
  switch (mode) {
    case CorrelationMode::ClosedForm: return "closed";
    case CorrelationMode::Quadrature: return "quad";
    case CorrelationMode::Both: return "both";
  }
  return "?";
}

const char* to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::CoherenceZero: return "CoherenceZero";
    case EventKind::Revival: return "Revival";
    case EventKind::Disentangled: return "Disentangled";
  }
  return "?";
}

const char* to_string(FigureId id) noexcept {
  switch (id) {
    case FigureId::Fig1: return "fig1";
    case FigureId::Fig2: return "fig2";
    case FigureId::Fig3a: return "fig3a";
    case FigureId::Fig3b: return "fig3b";
  }
  return "?";
}

std::optional<FigureId> figure_from_string(const std::string& name) noexcept {
  if (name == "fig1") return FigureId::Fig1;
  if (name == "fig2") return FigureId::Fig2;
  if (name == "fig3a") return FigureId::Fig3a;
  if (name == "fig3b") return FigureId::Fig3b;
  return std::nullopt;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  const int n = cfg.grid.count;
  std::vector<double> lengths(n);
  for (int i = 0; i < n; ++i) lengths[i] = cfg.grid.at(i);

  const std::vector<CorrelationValue> corr = correlations(cfg, lengths);

  SweepResult result;
  result.rows.resize(n);
  std::vector<double> entropy(n);
  const bool pair = std::holds_alternative<PairAmplitudes>(cfg.state);
  double pair_scale = 0.0;

  if (pair) {
    const auto& amps = std::get<PairAmplitudes>(cfg.state);
    pair_scale = 2.0 * std::abs(amps.a()) * std::abs(amps.b());
    for (int i = 0; i < n; ++i) {
      const DensityMatrix4 rho = evolve_pair(amps, corr[i]);
      entropy[i] = linear_entropy_4(rho);
      result.rows[i] = {lengths[i], corr[i], entropy[i], concurrence(rho)};
    }
  } else {
    const auto& amps = std::get<SingleAmplitudes>(cfg.state);
    for (int i = 0; i < n; ++i) {
      const DensityMatrix2 rho = evolve_single(amps, corr[i]);
      entropy[i] = linear_entropy_2(rho);
      result.rows[i] = {lengths[i], corr[i], entropy[i], std::nullopt};
    }
  }

  result.events = detect_events(cfg, lengths, corr, entropy, pair, pair_scale);
  return result;
}

std::vector<FigureCurve> reproduce_figure(FigureId id) {
  constexpr double kWidth = 1e12;     // rad/s
  constexpr double kFigureK = 500.0;  // 1/m
  const ChannelParams channel = ChannelParams::from_k(kFigureK, kWidth);

  std::vector<FigureCurve> curves;
  const auto single_family = [&](const SpectrumEnvelope& spectrum) {
    for (double alpha_sq : {0.1, 0.5, 0.8}) {
      SweepConfig cfg;
      cfg.spectrum = spectrum;
      cfg.channel = channel;
      cfg.state = SingleAmplitudes::from_population(alpha_sq);
      char label[32];
      std::snprintf(label, sizeof label, "alpha2_%.1f", alpha_sq);
      curves.push_back({label, cfg, run_sweep(cfg)});
    }
  };

  switch (id) {
    case FigureId::Fig1:
      single_family(SpectrumEnvelope::double_gaussian(kWidth));
      break;
    case FigureId::Fig2:
      single_family(SpectrumEnvelope::double_lorentzian(kWidth));
      break;
    case FigureId::Fig3a:
    case FigureId::Fig3b: {
      const std::pair<SpectrumKind, const char*> families[] = {
          {SpectrumKind::Gaussian, "gaussian"},
          {SpectrumKind::Lorentzian, "lorentzian"},
          {SpectrumKind::Rectangular, "rectangular"},
          {SpectrumKind::DoubleGaussian, "double_gaussian"},
          {SpectrumKind::DoubleLorentzian, "double_lorentzian"},
      };
      for (const auto& [kind, label] : families) {
        SweepConfig cfg;
        cfg.spectrum = pdc_marginal(kind, kDefaultPumpFrequency, kWidth).marginal;
        cfg.channel = channel;
        cfg.state = PairAmplitudes();
        curves.push_back({label, cfg, run_sweep(cfg)});
      }
      break;
    }
  }
  return curves;
}

}  // namespace dephasim
