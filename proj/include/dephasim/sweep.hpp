#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dephasim/channel.hpp"
#include "dephasim/correlation.hpp"
#include "dephasim/measures.hpp"
#include "dephasim/spectrum.hpp"
#include "dephasim/states.hpp"

namespace dephasim {

enum class CorrelationMode { ClosedForm, Quadrature, Both };

const char* to_string(CorrelationMode mode) noexcept;

// Uniform crystal-length grid. The default resolves the 2pi/2500 m revival
// spacing of the k = 500/m double-peak spectra with ~250 points per period.
struct LengthGrid {
  double start = 0.0;   // m, >= 0
  double stop = 0.02;   // m
  int count = 2001;     // >= 2
  double step() const noexcept { return (stop - start) / (count - 1); }
  double at(int i) const noexcept { return start + i * step(); }
};

struct SweepConfig {
  SpectrumEnvelope spectrum;
  ChannelParams channel = ChannelParams::from_k(500.0, 1e12);
  std::variant<SingleAmplitudes, PairAmplitudes> state = SingleAmplitudes();
  LengthGrid grid;
  CorrelationMode mode = CorrelationMode::ClosedForm;
  double quad_tol = kDefaultQuadTol;
};

enum class EventKind { CoherenceZero, Revival, Disentangled };

const char* to_string(EventKind kind) noexcept;

struct SweepEvent {
  EventKind kind{};
  double length = 0.0;     // m
  double amplitude = 0.0;  // S_L at a revival, |F| or C at a zero
};

struct SweepRow {
  double length = 0.0;  // m
  CorrelationValue correlation{};
  double linear_entropy = 0.0;
  std::optional<double> concurrence;  // pair sweeps only
};

struct SweepResult {
  std::vector<SweepRow> rows;      // ascending length
  std::vector<SweepEvent> events;  // ascending length
};

// Detection thresholds, fixed and recorded with every output.
inline constexpr double kZeroThreshold = 1e-12;       // |F| or C counts as vanished
inline constexpr double kRevivalProminence = 1e-6;    // topographic prominence of S_L dips
inline constexpr double kOracleAgreement = 1e-7;      // Both-mode closed/quadrature gate

// Runs the scan: per-point correlation (closed form, quadrature, or both with
// a mandatory agreement check), the state evolution, linear entropy, and for
// pair states the eigenvalue-route concurrence. Event detection:
//   Revival       local minimum of S_L with prominence >= 1e-6;
//   CoherenceZero / Disentangled
//                 |F| (resp. C) below 1e-12 at a grid point (one event per
//                 contiguous run), or an interpolated sign crossing of the
//                 de-carriered correlation when it is real.
SweepResult run_sweep(const SweepConfig& config);

enum class FigureId { Fig1, Fig2, Fig3a, Fig3b };

const char* to_string(FigureId id) noexcept;
std::optional<FigureId> figure_from_string(const std::string& name) noexcept;

struct FigureCurve {
  std::string label;
  SweepConfig config;
  SweepResult result;
};

// Canonical parameterization behind the published curves, all at k = 500/m:
//   Fig1  double-Gaussian (sep 5 dw), single photon, |alpha|^2 in {0.1,0.5,0.8}
//   Fig2  double-Lorentzian (sep 30 dw), same three populations
//   Fig3a/Fig3b  pair state a = b = 1/sqrt(2) across the five PDC marginals,
//                read out as S_L (3a) or concurrence (3b)
std::vector<FigureCurve> reproduce_figure(FigureId id);

}  // namespace dephasim
