#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dephasim {

// Frequency spectrum envelope families. All frequencies are stored as
// detunings nu = omega - omega_ref (rad/s); optical carriers near 1e15 rad/s
// would otherwise eat ~15 digits of every phase computation. |F(l)| never
// depends on omega_ref, which only contributes an overall phase.
enum class SpectrumKind {
  White,
  Gaussian,
  Lorentzian,
  Rectangular,
  MultiDelta,
  DoubleGaussian,
  DoubleLorentzian,
  Tabulated,
};

const char* to_string(SpectrumKind kind) noexcept;

struct SpectralPeak {
  double detuning = 0.0;  // rad/s
  double weight = 0.0;    // dimensionless, weights sum to 1
};

struct SpectralSample {
  double detuning = 0.0;  // rad/s, strictly increasing
  double density = 0.0;   // s/rad, non-negative
};

// A normalized frequency density F(nu). Immutable after construction; all
// factories validate their inputs. power = 2 selects the squared-envelope
// shapes that arise as PDC marginals (the |h|^4-type densities), with their
// own normalization constants.
class SpectrumEnvelope {
 public:
  // White has no density and no width; it is a symbolic kind realized
  // downstream as the Markovian indicator correlation.
  SpectrumEnvelope();  // White
  static SpectrumEnvelope white();
  static SpectrumEnvelope gaussian(double width, double center = 0.0, int power = 1);
  static SpectrumEnvelope lorentzian(double width, double center = 0.0, int power = 1);
  static SpectrumEnvelope rectangular(double width, double center = 0.0);
  // Two identical peaks at center -+ separation/2. Defaults follow the
  // canonical choices 5*width (Gaussian) and 30*width (Lorentzian) that make
  // the peaks effectively disjoint.
  static SpectrumEnvelope double_gaussian(double width, std::optional<double> separation = {},
                                          double center = 0.0, int power = 1);
  static SpectrumEnvelope double_lorentzian(double width, std::optional<double> separation = {},
                                            double center = 0.0, int power = 1);
  static SpectrumEnvelope multi_delta(std::vector<SpectralPeak> peaks);
  // N = 2 comb with equal weights at center -+ spacing/2.
  static SpectrumEnvelope multi_delta_pair(double spacing, double center = 0.0);
  // Takes ownership of the samples and rescales them so the trapezoid
  // integral is exactly 1. Throws empty_or_unsorted / all_zero.
  static SpectrumEnvelope tabulated(std::vector<SpectralSample> samples);

  SpectrumKind kind() const noexcept { return kind_; }
  int power() const noexcept { return power_; }
  double width() const noexcept { return width_; }
  double center_detuning() const noexcept { return center_; }
  double separation() const noexcept { return separation_; }
  const std::vector<SpectralPeak>& peaks() const noexcept { return peaks_; }
  const std::vector<SpectralSample>& samples() const noexcept { return samples_; }

  bool has_density() const noexcept;   // false for White and MultiDelta
  bool heavy_tailed() const noexcept;  // Lorentzian-type: algebraic tails
  bool analytic() const noexcept;      // closed-form correlation exists

  // Pointwise density (s/rad). Throws kind_has_no_density for White/MultiDelta.
  double evaluate(double detuning) const;
  void evaluate_batch(std::span<const double> detuning, std::span<double> out) const;

  // Width used to tie k = dn*dw/c to this spectrum: the family width for the
  // analytic shapes, the peak span for MultiDelta, the RMS width for
  // Tabulated.
  double width_scale() const;

  // Mean detuning; the de-carriered correlation F(l)*exp(-i*carrier*dn*l/c)
  // is real for every symmetric family.
  double carrier_detuning() const noexcept;

  struct Segment {
    double lo = 0.0;
    double hi = 0.0;
  };
  // Truncated integration support for the Gauss-Kronrod oracle: exact for
  // Rectangular/Tabulated, +-tail_widths around each peak for Gaussian-type.
  // Heavy-tailed and non-density kinds return no segments.
  std::vector<Segment> support(double tail_widths = 10.0) const;

 private:
  SpectrumKind kind_ = SpectrumKind::White;
  int power_ = 1;
  double width_ = 0.0;
  double center_ = 0.0;
  double separation_ = 0.0;
  std::vector<SpectralPeak> peaks_;
  std::vector<SpectralSample> samples_;
  double tab_mean_ = 0.0;  // cached moments of tabulated data
  double tab_rms_ = 0.0;
};

// Spec-level alias for the tabulated factory.
SpectrumEnvelope normalize_tabulated(std::vector<SpectralSample> samples);

// CSV with header "detuning_rad_per_s,density_s_per_rad", rows ascending.
SpectrumEnvelope load_tabulated_csv(const std::string& path);

// Effective one-photon spectral model of a frequency-anticorrelated photon
// pair: the pump delta collapses the omega_2 integral and leaves a marginal
// density in omega_1, expressed here in detunings from pump_frequency/2.
struct PdcSpectralModel {
  double pump_frequency = 0.0;  // rad/s, treated as exact
  SpectrumEnvelope marginal;
};

// kind in {Gaussian, Lorentzian, Rectangular, DoubleGaussian, DoubleLorentzian,
// White}. The filtered families become squared-envelope marginals (power = 2);
// Rectangular stays a rectangle and White stays symbolic.
PdcSpectralModel pdc_marginal(SpectrumKind kind, double pump_frequency, double width,
                              std::optional<double> separation = {});

// 390 nm pump. Every published curve depends only on detunings and
// k = dn*dw/c, never on the absolute pump frequency.
inline constexpr double kDefaultPumpFrequency = 4.83e15;  // rad/s

}  // namespace dephasim
