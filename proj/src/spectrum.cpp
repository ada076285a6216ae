#include "dephasim/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dephasim/errors.hpp"
#include "dephasim/kernels.hpp"

namespace dephasim {

namespace {

constexpr double kRootPi = 1.7724538509055160273;     // sqrt(pi)
constexpr double kRootTwoPi = 2.5066282746310005024;  // sqrt(2*pi)

void require_width(double width) {
  if (!(width > 0.0) || !std::isfinite(width))
    fail(errc::invalid_config, "spectrum width must be positive and finite");
}

void require_power(int power) {
  if (power != 1 && power != 2) fail(errc::invalid_config, "spectrum power must be 1 or 2");
}

double lorentzian_term(double d, double w, int power) {
  double q = w * w + d * d;
  return power == 1 ? 1.0 / q : w * w * w / (q * q);
}

}  // namespace

const char* to_string(SpectrumKind kind) noexcept {
  switch (kind) {
    case SpectrumKind::White: return "white";
    case SpectrumKind::Gaussian: return "gaussian";
    case SpectrumKind::Lorentzian: return "lorentzian";
    case SpectrumKind::Rectangular: return "rectangular";
    case SpectrumKind::MultiDelta: return "multidelta";
    case SpectrumKind::DoubleGaussian: return "double-gaussian";
    case SpectrumKind::DoubleLorentzian: return "double-lorentzian";
    case SpectrumKind::Tabulated: return "tabulated";
  }
  return "?";
}

SpectrumEnvelope::SpectrumEnvelope() = default;

SpectrumEnvelope SpectrumEnvelope::white() { return SpectrumEnvelope{}; }

SpectrumEnvelope SpectrumEnvelope::gaussian(double width, double center, int power) {
  require_width(width);
  require_power(power);
  SpectrumEnvelope s;
  s.kind_ = SpectrumKind::Gaussian;
  s.width_ = width;
  s.center_ = center;
  s.power_ = power;
  return s;
}

SpectrumEnvelope SpectrumEnvelope::lorentzian(double width, double center, int power) {
  require_width(width);
  require_power(power);
  SpectrumEnvelope s;
  s.kind_ = SpectrumKind::Lorentzian;
  s.width_ = width;
  s.center_ = center;
  s.power_ = power;
  return s;
}

SpectrumEnvelope SpectrumEnvelope::rectangular(double width, double center) {
  require_width(width);
  SpectrumEnvelope s;
  s.kind_ = SpectrumKind::Rectangular;
  s.width_ = width;
  s.center_ = center;
  return s;
}

SpectrumEnvelope SpectrumEnvelope::double_gaussian(double width, std::optional<double> separation,
                                                   double center, int power) {
  require_width(width);
  require_power(power);
  double sep = separation.value_or(5.0 * width);
  if (!(sep > 0.0)) fail(errc::invalid_config, "peak separation must be positive");
  SpectrumEnvelope s;
  s.kind_ = SpectrumKind::DoubleGaussian;
  s.width_ = width;
  s.center_ = center;
  s.separation_ = sep;
  s.power_ = power;
  return s;
}

SpectrumEnvelope SpectrumEnvelope::double_lorentzian(double width, std::optional<double> separation,
                                                     double center, int power) {
  require_width(width);
  require_power(power);
  double sep = separation.value_or(30.0 * width);
  if (!(sep > 0.0)) fail(errc::invalid_config, "peak separation must be positive");
  SpectrumEnvelope s;
  s.kind_ = SpectrumKind::DoubleLorentzian;
  s.width_ = width;
  s.center_ = center;
  s.separation_ = sep;
  s.power_ = power;
  return s;
}

SpectrumEnvelope SpectrumEnvelope::multi_delta(std::vector<SpectralPeak> peaks) {
  if (peaks.empty()) fail(errc::invalid_config, "multi-delta spectrum needs at least one peak");
  double sum = 0.0;
  for (const auto& p : peaks) {
    if (!(p.weight > 0.0)) fail(errc::invalid_config, "multi-delta weights must be positive");
    if (!std::isfinite(p.detuning)) fail(errc::invalid_config, "multi-delta detuning not finite");
    sum += p.weight;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    fail(errc::not_normalized, "multi-delta weights must sum to 1");
  SpectrumEnvelope s;
  s.kind_ = SpectrumKind::MultiDelta;
  s.peaks_ = std::move(peaks);
  return s;
}

SpectrumEnvelope SpectrumEnvelope::multi_delta_pair(double spacing, double center) {
  if (!(spacing > 0.0)) fail(errc::invalid_config, "peak spacing must be positive");
  return multi_delta({{center - 0.5 * spacing, 0.5}, {center + 0.5 * spacing, 0.5}});
}

SpectrumEnvelope SpectrumEnvelope::tabulated(std::vector<SpectralSample> samples) {
  if (samples.size() < 2)
    fail(errc::empty_or_unsorted, "tabulated spectrum needs at least two samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].detuning) || !std::isfinite(samples[i].density))
      fail(errc::empty_or_unsorted, "tabulated sample not finite");
    if (samples[i].density < 0.0)
      fail(errc::empty_or_unsorted, "tabulated density must be non-negative");
    if (i > 0 && !(samples[i].detuning > samples[i - 1].detuning))
      fail(errc::empty_or_unsorted, "tabulated detunings must be strictly increasing");
  }
  // Trapezoid mass and first two moments in one pass.
  double mass = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    double h = samples[i].detuning - samples[i - 1].detuning;
    double fa = samples[i - 1].density, fb = samples[i].density;
    double xa = samples[i - 1].detuning, xb = samples[i].detuning;
    mass += 0.5 * h * (fa + fb);
    m1 += 0.5 * h * (fa * xa + fb * xb);
    m2 += 0.5 * h * (fa * xa * xa + fb * xb * xb);
  }
  if (!(mass > 0.0)) fail(errc::all_zero, "tabulated spectrum carries no mass");
  double inv = 1.0 / mass;
  for (auto& s : samples) s.density *= inv;
  SpectrumEnvelope s;
  s.kind_ = SpectrumKind::Tabulated;
  s.samples_ = std::move(samples);
  s.tab_mean_ = m1 * inv;
  s.tab_rms_ = std::sqrt(std::max(0.0, m2 * inv - s.tab_mean_ * s.tab_mean_));
  return s;
}

bool SpectrumEnvelope::has_density() const noexcept {
  return kind_ != SpectrumKind::White && kind_ != SpectrumKind::MultiDelta;
}

bool SpectrumEnvelope::heavy_tailed() const noexcept {
  return kind_ == SpectrumKind::Lorentzian || kind_ == SpectrumKind::DoubleLorentzian;
}

bool SpectrumEnvelope::analytic() const noexcept { return kind_ != SpectrumKind::Tabulated; }

double SpectrumEnvelope::evaluate(double detuning) const {
  if (!has_density())
    fail(errc::kind_has_no_density,
         std::string(to_string(kind_)) + " spectrum has no pointwise density");
  double d = detuning - center_;
  switch (kind_) {
    case SpectrumKind::Gaussian: {
      double x = d / width_;
      return power_ == 1 ? std::exp(-x * x) / (width_ * kRootPi)
                         : std::exp(-2.0 * x * x) * std::numbers::sqrt2 / (width_ * kRootPi);
    }
    case SpectrumKind::Lorentzian: {
      double amp = power_ == 1 ? width_ / std::numbers::pi : 2.0 / std::numbers::pi;
      return amp * lorentzian_term(d, width_, power_);
    }
    case SpectrumKind::Rectangular:
      return std::abs(d) <= width_ ? 0.5 / width_ : 0.0;
    case SpectrumKind::DoubleGaussian: {
      double xm = (d + 0.5 * separation_) / width_;
      double xp = (d - 0.5 * separation_) / width_;
      if (power_ == 1)
        return (std::exp(-xm * xm) + std::exp(-xp * xp)) / (2.0 * width_ * kRootPi);
      return (std::exp(-2.0 * xm * xm) + std::exp(-2.0 * xp * xp)) / (kRootTwoPi * width_);
    }
    case SpectrumKind::DoubleLorentzian: {
      // lorentzian_term already carries the w^3 numerator for power 2
      double amp = power_ == 1 ? width_ / (2.0 * std::numbers::pi) : 1.0 / std::numbers::pi;
      double tm = lorentzian_term(d + 0.5 * separation_, width_, power_);
      double tp = lorentzian_term(d - 0.5 * separation_, width_, power_);
      return amp * (tm + tp);
    }
    case SpectrumKind::Tabulated: {
      const auto& s = samples_;
      if (detuning < s.front().detuning || detuning > s.back().detuning) return 0.0;
      auto it = std::upper_bound(s.begin(), s.end(), detuning,
                                 [](double v, const SpectralSample& q) { return v < q.detuning; });
      if (it == s.begin()) return s.front().density;
      if (it == s.end()) return s.back().density;
      const auto& b = *it;
      const auto& a = *(it - 1);
      double frac = (detuning - a.detuning) / (b.detuning - a.detuning);
      return a.density + frac * (b.density - a.density);
    }
    default:
      fail(errc::kind_has_no_density, "unreachable");
  }
}

void SpectrumEnvelope::evaluate_batch(std::span<const double> detuning,
                                      std::span<double> out) const {
  if (out.size() < detuning.size()) fail(errc::invalid_config, "output span too small");
  const std::size_t n = detuning.size();
  const auto& ops = kernels::active();
  switch (kind_) {
    case SpectrumKind::Gaussian: {
      double es = power_ == 1 ? 1.0 : 2.0;
      double amp = power_ == 1 ? 1.0 / (width_ * kRootPi)
                               : std::numbers::sqrt2 / (width_ * kRootPi);
      std::vector<double> arg(n);
      for (std::size_t i = 0; i < n; ++i) {
        double x = (detuning[i] - center_) / width_;
        arg[i] = -es * x * x;
      }
      ops.exp(arg.data(), out.data(), n);
      for (std::size_t i = 0; i < n; ++i) out[i] *= amp;
      return;
    }
    case SpectrumKind::DoubleGaussian: {
      double es = power_ == 1 ? 1.0 : 2.0;
      double amp = power_ == 1 ? 1.0 / (2.0 * width_ * kRootPi) : 1.0 / (kRootTwoPi * width_);
      std::vector<double> arg(2 * n), val(2 * n);
      for (std::size_t i = 0; i < n; ++i) {
        double xm = (detuning[i] - center_ + 0.5 * separation_) / width_;
        double xp = (detuning[i] - center_ - 0.5 * separation_) / width_;
        arg[i] = -es * xm * xm;
        arg[n + i] = -es * xp * xp;
      }
      ops.exp(arg.data(), val.data(), 2 * n);
      for (std::size_t i = 0; i < n; ++i) out[i] = amp * (val[i] + val[n + i]);
      return;
    }
    default:
      for (std::size_t i = 0; i < n; ++i) out[i] = evaluate(detuning[i]);
      return;
  }
}

double SpectrumEnvelope::width_scale() const {
  switch (kind_) {
    case SpectrumKind::White:
      return 1.0;  // arbitrary: the white correlation is scale-free
    case SpectrumKind::MultiDelta: {
      auto [lo, hi] = std::minmax_element(
          peaks_.begin(), peaks_.end(),
          [](const SpectralPeak& a, const SpectralPeak& b) { return a.detuning < b.detuning; });
      return hi->detuning - lo->detuning;
    }
    case SpectrumKind::Tabulated:
      return tab_rms_;
    default:
      return width_;
  }
}

double SpectrumEnvelope::carrier_detuning() const noexcept {
  switch (kind_) {
    case SpectrumKind::MultiDelta: {
      double m = 0.0;
      for (const auto& p : peaks_) m += p.weight * p.detuning;
      return m;
    }
    case SpectrumKind::Tabulated:
      return tab_mean_;
    default:
      return center_;
  }
}

std::vector<SpectrumEnvelope::Segment> SpectrumEnvelope::support(double tail_widths) const {
  switch (kind_) {
    case SpectrumKind::Gaussian:
      return {{center_ - tail_widths * width_, center_ + tail_widths * width_}};
    case SpectrumKind::Rectangular:
      return {{center_ - width_, center_ + width_}};
    case SpectrumKind::DoubleGaussian: {
      double t = tail_widths * width_;
      double lo1 = center_ - 0.5 * separation_ - t, hi1 = center_ - 0.5 * separation_ + t;
      double lo2 = center_ + 0.5 * separation_ - t, hi2 = center_ + 0.5 * separation_ + t;
      if (hi1 >= lo2) return {{lo1, hi2}};
      return {{lo1, hi1}, {lo2, hi2}};
    }
    case SpectrumKind::Tabulated:
      return {{samples_.front().detuning, samples_.back().detuning}};
    default:
      return {};
  }
}

SpectrumEnvelope normalize_tabulated(std::vector<SpectralSample> samples) {
  return SpectrumEnvelope::tabulated(std::move(samples));
}

SpectrumEnvelope load_tabulated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::file_not_found, "cannot open spectrum file: " + path);
  std::string line;
  if (!std::getline(in, line)) fail(errc::empty_or_unsorted, "empty spectrum file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "detuning_rad_per_s,density_s_per_rad")
    fail(errc::invalid_config, "unexpected CSV header in " + path + ": " + line);
  std::vector<SpectralSample> samples;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      fail(errc::invalid_config, path + ": missing comma on line " + std::to_string(lineno));
    char* end = nullptr;
    std::string a = line.substr(0, comma), b = line.substr(comma + 1);
    double nu = std::strtod(a.c_str(), &end);
    if (end == a.c_str() || *end != '\0')
      fail(errc::invalid_config, path + ": bad detuning on line " + std::to_string(lineno));
    double f = std::strtod(b.c_str(), &end);
    if (end == b.c_str() || *end != '\0')
      fail(errc::invalid_config, path + ": bad density on line " + std::to_string(lineno));
    samples.push_back({nu, f});
  }
  return SpectrumEnvelope::tabulated(std::move(samples));
}

PdcSpectralModel pdc_marginal(SpectrumKind kind, double pump_frequency, double width,
                              std::optional<double> separation) {
  if (!(pump_frequency > 0.0)) fail(errc::invalid_config, "pump frequency must be positive");
  SpectrumEnvelope marginal;
  switch (kind) {
    case SpectrumKind::White:
      marginal = SpectrumEnvelope::white();
      break;
    case SpectrumKind::Gaussian:
      marginal = SpectrumEnvelope::gaussian(width, 0.0, 2);
      break;
    case SpectrumKind::Lorentzian:
      marginal = SpectrumEnvelope::lorentzian(width, 0.0, 2);
      break;
    case SpectrumKind::Rectangular:
      // the square of a rectangle renormalizes back to the same rectangle
      marginal = SpectrumEnvelope::rectangular(width, 0.0);
      break;
    case SpectrumKind::DoubleGaussian:
      marginal = SpectrumEnvelope::double_gaussian(width, separation.value_or(5.0 * width), 0.0, 2);
      break;
    case SpectrumKind::DoubleLorentzian:
      marginal =
          SpectrumEnvelope::double_lorentzian(width, separation.value_or(30.0 * width), 0.0, 2);
      break;
    default:
      fail(errc::unsupported_kind,
           std::string("no PDC marginal for spectrum kind ") + to_string(kind));
  }
  return PdcSpectralModel{pump_frequency, std::move(marginal)};
}

}  // namespace dephasim
