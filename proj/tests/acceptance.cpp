// Acceptance suite: every release gate in one binary, one PASS/FAIL line per
// criterion. Exit status is the number of failed criteria.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dephasim/correlation.hpp"
#include "dephasim/io.hpp"
#include "dephasim/measures.hpp"
#include "dephasim/states.hpp"
#include "dephasim/sweep.hpp"
#include "oracles.hpp"

using namespace dephasim;
namespace fs = std::filesystem;

namespace {

constexpr double kWidth = 1e12;  // rad/s
const ChannelParams kChannel = ChannelParams::from_k(500.0, kWidth);

int failures = 0;

void report(int index, const char* title, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", index, title,
              detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// --- 1: closed form vs adaptive quadrature across every family -------------

void criterion_oracle_equivalence() {
  struct Entry {
    const char* name;
    SpectrumEnvelope spec;
  };
  const std::vector<Entry> entries = {
      // seven analytic power-1 spectra (White is excluded: its correlation is
      // the singular Markovian indicator, which has no quadrature route)
      {"gaussian", SpectrumEnvelope::gaussian(kWidth)},
      {"lorentzian", SpectrumEnvelope::lorentzian(kWidth)},
      {"rectangular", SpectrumEnvelope::rectangular(kWidth)},
      {"multidelta-2", SpectrumEnvelope::multi_delta_pair(kWidth)},
      {"multidelta-3", SpectrumEnvelope::multi_delta(
                           {{-1.5 * kWidth, 0.25}, {0.2 * kWidth, 0.4}, {kWidth, 0.35}})},
      {"double-gaussian", SpectrumEnvelope::double_gaussian(kWidth)},
      {"double-lorentzian", SpectrumEnvelope::double_lorentzian(kWidth)},
      // the five PDC marginals (power 2 where applicable)
      {"pdc-gaussian", pdc_marginal(SpectrumKind::Gaussian, kDefaultPumpFrequency, kWidth)
                           .marginal},
      {"pdc-lorentzian", pdc_marginal(SpectrumKind::Lorentzian, kDefaultPumpFrequency, kWidth)
                             .marginal},
      {"pdc-rectangular", pdc_marginal(SpectrumKind::Rectangular, kDefaultPumpFrequency, kWidth)
                              .marginal},
      {"pdc-double-gaussian",
       pdc_marginal(SpectrumKind::DoubleGaussian, kDefaultPumpFrequency, kWidth).marginal},
      {"pdc-double-lorentzian",
       pdc_marginal(SpectrumKind::DoubleLorentzian, kDefaultPumpFrequency, kWidth).marginal},
  };

  double worst = 0.0;
  std::string worst_at = "-";
  bool ok = true;
  try {
    for (const auto& entry : entries) {
      for (int i = 0; i < 64; ++i) {
        const double l = 1e-5 * std::pow(1e4, i / 63.0);  // log-spaced in [1e-5, 1e-1]
        const double dev =
            std::abs(closed_form(entry.spec, kChannel, l) - quadrature(entry.spec, kChannel, l));
        if (dev > worst) {
          worst = dev;
          worst_at = std::string(entry.name) + " @ l=" + fmt(l);
        }
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    worst_at = e.what();
  }
  ok = ok && worst <= 1e-8;
  report(1, "oracle equivalence: 7 power-1 families + 5 PDC marginals, 64 lengths, <= 1e-8",
         ok, "worst " + fmt(worst) + " at " + worst_at);
}

// --- 2: closed-form regression values ---------------------------------------

void criterion_closed_form_regression() {
  bool ok = true;
  std::string detail;

  for (double alpha_sq : {0.5, 0.3}) {
    const auto amps = SingleAmplitudes::from_population(alpha_sq);
    const double coeff = 4.0 * std::norm(amps.alpha()) * std::norm(amps.beta());
    const auto f = closed_form(SpectrumEnvelope::gaussian(kWidth), kChannel, 1.0 / 500.0);
    const double sl = linear_entropy_2(evolve_single(amps, f));
    const double expected = coeff * (1.0 - std::exp(-0.5));
    if (std::abs(sl - expected) > 1e-10) {
      ok = false;
      detail += "gaussian S_L dev " + fmt(std::abs(sl - expected)) + "; ";
    }
  }

  const double mag =
      std::abs(closed_form(SpectrumEnvelope::lorentzian(kWidth), kChannel, std::log(2.0) / 500.0));
  if (std::abs(mag - 0.5) > 1e-10) {
    ok = false;
    detail += "lorentzian |F| dev " + fmt(std::abs(mag - 0.5)) + "; ";
  }

  const auto amps = SingleAmplitudes::from_population(0.5);
  const auto fr = closed_form(SpectrumEnvelope::rectangular(kWidth), kChannel,
                              3.141592653589793 / 500.0);
  const double sl_rect = linear_entropy_2(evolve_single(amps, fr));
  if (std::abs(sl_rect - 1.0) > 1e-9) {
    ok = false;
    detail += "rect S_L dev " + fmt(std::abs(sl_rect - 1.0)) + "; ";
  }
  if (detail.empty()) detail = "all three identities hold";
  report(2, "closed-form regression at u = 1, ln 2, pi", ok, detail);
}

// --- 3: revival structure of the double-Gaussian sweep ----------------------

void criterion_revival_structure() {
  // Minima of S_L(l) = 1 - exp(-(kl)^2/2) cos^2(2.5 kl), evaluated to 30
  // digits; the envelope pulls each dip left of the naive cos^2 = 1 points.
  const double expected_l[3] = {0.0023301315134074942, 0.004676594568162228,
                                0.0070486362188175166};
  const double expected_sl[3] = {0.51884293701182738, 0.94668866016344155,
                                 0.99865822300451705};

  SweepConfig cfg;
  cfg.spectrum = SpectrumEnvelope::double_gaussian(kWidth);
  cfg.channel = kChannel;
  cfg.state = SingleAmplitudes::from_population(0.5);
  const auto result = run_sweep(cfg);

  std::vector<SweepEvent> revivals;
  for (const auto& e : result.events)
    if (e.kind == EventKind::Revival) revivals.push_back(e);

  bool ok = revivals.size() >= 3;
  std::string detail = "found " + std::to_string(revivals.size()) + " revivals";
  if (ok) {
    // independent refinement of the same closed form, frozen values verified
    auto entropy = [](double l) {
      const double u = 500.0 * l;
      const double c = std::cos(2.5 * u);
      return 1.0 - std::exp(-0.5 * u * u) * c * c;
    };
    for (int m = 0; m < 3 && ok; ++m) {
      const double refined =
          oracle::golden_min(entropy, expected_l[m] - 4e-5, expected_l[m] + 4e-5);
      if (std::abs(refined - expected_l[m]) > 1e-9 ||
          std::abs(entropy(refined) - expected_sl[m]) > 1e-12) {
        ok = false;
        detail = "frozen oracle values failed re-derivation";
        break;
      }
      const double dl = std::abs(revivals[m].length - expected_l[m]);
      const double dsl = std::abs(revivals[m].amplitude - expected_sl[m]);
      if (dl > cfg.grid.step() || dsl > 1e-3) {
        ok = false;
        detail = "revival " + std::to_string(m + 1) + ": dl=" + fmt(dl) + " dS=" + fmt(dsl);
      }
    }
    if (ok)
      detail = "three dips at l = 2.330, 4.677, 7.049 mm within one grid step / 1e-3";
  }
  report(3, "double-Gaussian revival events match the entropy minima", ok, detail);
}

// --- 4: concurrence equivalence over random draws ----------------------------

void criterion_concurrence_equivalence() {
  oracle::Rng rng(0xC0FFEEull);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    auto [a, b] = rng.amplitude_pair();
    const auto amps = PairAmplitudes::of(a, b);
    const std::complex<double> g = rng.correlation();
    worst = std::max(worst,
                     std::abs(concurrence(evolve_pair(amps, g)) - concurrence_closed(amps, g)));
  }
  const double bell = concurrence(evolve_pair(PairAmplitudes(), {1.0, 0.0}));
  const double dead = concurrence(evolve_pair(PairAmplitudes(), {0.0, 0.0}));
  const bool ok = worst <= 1e-10 && bell == 1.0 && dead == 0.0;
  report(4, "eigenvalue concurrence equals 2|a||b||G| over 1e4 draws; Bell exact", ok,
         "worst dev " + fmt(worst) + ", C(Bell)=" + fmt(bell) + ", C(dephased)=" + fmt(dead));
}

// --- 5: conservation law along pair sweeps -----------------------------------

void criterion_conservation_law() {
  bool ok = true;
  double worst = 0.0;
  for (double a_sq : {0.5, 0.2}) {
    for (SpectrumKind kind : {SpectrumKind::Gaussian, SpectrumKind::Rectangular,
                              SpectrumKind::DoubleGaussian, SpectrumKind::DoubleLorentzian}) {
      SweepConfig cfg;
      cfg.spectrum = pdc_marginal(kind, kDefaultPumpFrequency, kWidth).marginal;
      cfg.channel = kChannel;
      cfg.state = PairAmplitudes::from_population(a_sq);
      cfg.grid.count = 801;
      const auto result = run_sweep(cfg);
      const auto amps = PairAmplitudes::from_population(a_sq);
      const double expected = 4.0 * std::norm(amps.a()) * std::norm(amps.b());
      const double at_zero = *result.rows.front().concurrence;
      worst = std::max(worst, std::abs(at_zero * at_zero - expected));
      for (const auto& row : result.rows) {
        const double c = *row.concurrence;
        worst = std::max(worst, std::abs(c * c + 1.5 * row.linear_entropy - expected));
      }
    }
  }
  ok = worst <= 1e-9;
  report(5, "C^2 + (3/2) S_L is constant (= 4|a|^2|b|^2) along every pair sweep", ok,
         "worst dev " + fmt(worst));
}

// --- 6: Markovian idealization of the white spectrum -------------------------

void criterion_white_markovian() {
  bool ok = true;
  std::string detail = "single and pair sweeps exact";

  SweepConfig cfg;
  cfg.spectrum = SpectrumEnvelope::white();
  cfg.channel = kChannel;
  cfg.state = SingleAmplitudes::from_population(0.5);
  const auto single = run_sweep(cfg);
  if (single.rows.front().linear_entropy != 0.0) ok = false;
  for (std::size_t i = 1; i < single.rows.size(); ++i)
    if (single.rows[i].linear_entropy != 1.0) ok = false;  // 4|a|^2|b|^2 at a^2 = 1/2

  cfg.state = PairAmplitudes::from_population(0.5);
  const auto pair = run_sweep(cfg);
  if (*pair.rows.front().concurrence != 1.0) ok = false;  // 2|a||b| at l = 0
  if (pair.rows.front().linear_entropy != 0.0) ok = false;
  for (std::size_t i = 1; i < pair.rows.size(); ++i) {
    if (*pair.rows[i].concurrence != 0.0) ok = false;
    if (std::abs(pair.rows[i].linear_entropy - 2.0 / 3.0) > 1e-15) ok = false;
  }
  if (!ok) detail = "an idealized value deviated";
  report(6, "white spectrum: complete decoherence at every l > 0, none at l = 0", ok, detail);
}

// --- 7: multi-delta periodicity ----------------------------------------------

void criterion_multi_delta_periodicity() {
  const double period = 2.0 * 3.141592653589793 / 500.0;  // 2 pi c / (dn |w1 - w2|)
  SweepConfig cfg;
  cfg.spectrum = SpectrumEnvelope::multi_delta_pair(kWidth);
  cfg.channel = kChannel;
  cfg.state = SingleAmplitudes::from_population(0.5);
  cfg.grid = LengthGrid{0.0, 4.0 * period, 1001};
  const auto result = run_sweep(cfg);
  double worst = 0.0;
  for (int m = 1; m <= 4; ++m)
    worst = std::max(worst, result.rows[250 * m].linear_entropy);
  report(7, "N = 2 comb: S_L < 1e-10 at every multiple of the revival period", worst < 1e-10,
         "worst S_L at a period point " + fmt(worst));
}

// --- 8: CLI determinism -------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion_cli_determinism() {
  const char* cli = std::getenv("DEPHASIM_CLI");
  if (!cli) {
    report(8, "CLI reruns are byte-identical", false,
           "set DEPHASIM_CLI to the dephasim binary (ctest does this automatically)");
    return;
  }
  const fs::path dir = fs::temp_directory_path() / "dephasim_acceptance";
  fs::create_directories(dir);
  bool ok = true;
  std::string detail = "sweep and figure outputs identical across reruns";
  const std::string commands[] = {
      "sweep --spectrum double-gaussian --points 501 --lmax 0.01 --out " +
          (dir / "a.csv").string(),
      "sweep --spectrum lorentzian --pair --format json --points 301 --out " +
          (dir / "a.json").string(),
      "figure fig3b --out " + (dir / "f.csv").string(),
  };
  const fs::path produced[] = {dir / "a.csv", dir / "a.json", dir / "f_double_lorentzian.csv"};
  std::string first[3];
  for (int round = 0; round < 2; ++round) {
    for (int i = 0; i < 3 && ok; ++i) {
      const std::string cmd = '"' + std::string(cli) + "\" " + commands[i] + " >/dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        ok = false;
        detail = "command failed: " + commands[i];
        break;
      }
      const std::string content = slurp(produced[i]);
      if (round == 0)
        first[i] = content;
      else if (content != first[i]) {
        ok = false;
        detail = "bytes changed for: " + commands[i];
      }
    }
  }
  report(8, "CLI reruns are byte-identical", ok, detail);
}

// --- 9: density-matrix validity over random channel outputs -------------------

void criterion_density_matrix_validity() {
  oracle::Rng rng(0xBADC0DEull);
  double worst_herm = 0.0, worst_trace = 0.0, min_eig = 1.0;
  for (int i = 0; i < 10000; ++i) {
    auto [a, b] = rng.amplitude_pair();
    const auto rho = evolve_pair(PairAmplitudes::of(a, b), rng.correlation());
    const auto& m = rho.entries();
    double trace = 0.0;
    for (int r = 0; r < 4; ++r) {
      trace += m[r * 4 + r].real();
      for (int c = 0; c < 4; ++c)
        worst_herm = std::max(worst_herm, std::abs(m[r * 4 + c] - std::conj(m[c * 4 + r])));
    }
    worst_trace = std::max(worst_trace, std::abs(trace - 1.0));
    min_eig = std::min(min_eig, eigvals_hermitian_4(m).values.back());

    auto [alpha, beta] = rng.amplitude_pair();
    const auto rho2 = evolve_single(SingleAmplitudes::of(alpha, beta), rng.correlation());
    worst_herm = std::max(worst_herm, std::abs(rho2.at(0, 1) - std::conj(rho2.at(1, 0))));
    worst_trace = std::max(
        worst_trace, std::abs(rho2.at(0, 0).real() + rho2.at(1, 1).real() - 1.0));
  }
  const bool ok = worst_herm <= 1e-12 && worst_trace <= 1e-12 && min_eig >= -1e-10;
  report(9, "channel outputs: Hermitian, unit trace, PSD over 1e4 draws", ok,
         "herm " + fmt(worst_herm) + ", trace " + fmt(worst_trace) + ", min eig " +
             fmt(min_eig));
}

}  // namespace

int main() {
  criterion_oracle_equivalence();
  criterion_closed_form_regression();
  criterion_revival_structure();
  criterion_concurrence_equivalence();
  criterion_conservation_law();
  criterion_white_markovian();
  criterion_multi_delta_periodicity();
  criterion_cli_determinism();
  criterion_density_matrix_validity();
  if (failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures;
}
