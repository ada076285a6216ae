#include "dephasim/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dephasim/errors.hpp"

namespace dephasim {
namespace {

// Shortest decimal that round-trips to the same double.
std::string format_double(double value) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

const std::vector<std::pair<std::string, SpectrumKind>>& spectrum_names() {
  static const std::vector<std::pair<std::string, SpectrumKind>> names = {
      {"white", SpectrumKind::White},
      {"gaussian", SpectrumKind::Gaussian},
      {"lorentzian", SpectrumKind::Lorentzian},
      {"rectangular", SpectrumKind::Rectangular},
      {"multidelta", SpectrumKind::MultiDelta},
      {"double-gaussian", SpectrumKind::DoubleGaussian},
      {"double-lorentzian", SpectrumKind::DoubleLorentzian},
  };
  return names;
}

struct CliValues {
  std::string spectrum = "gaussian";
  double k = 500.0;
  std::optional<double> delta_n;
  double width = 1e12;
  std::optional<double> sep;
  double alpha2 = 0.5;
  double a2 = 0.5;
  bool pair = false;
  double lmax = 0.02;
  int points = 2001;
  std::string mode;
  std::string format = "csv";
  std::string out;
  std::string figure_id;
};

void build_app(CLI::App& app, CliValues& v) {
  app.require_subcommand(1);

  auto* sweep = app.add_subcommand("sweep", "run a crystal-length scan");
  sweep->add_option("--spectrum", v.spectrum,
                    "white|gaussian|lorentzian|rectangular|multidelta|double-gaussian|"
                    "double-lorentzian|tabulated:<path>");
  auto* k_opt = sweep->add_option("--k", v.k, "dn*dw/c in 1/m")->check(CLI::PositiveNumber);
  sweep->add_option("--delta-n", v.delta_n, "birefringence n_V - n_H (overrides --k)")
      ->check(CLI::PositiveNumber)
      ->excludes(k_opt);
  sweep->add_option("--width", v.width, "spectral width dw in rad/s")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--sep", v.sep, "peak separation as a multiple of the width")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--alpha2", v.alpha2, "single-photon |alpha|^2")
      ->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--a2", v.a2, "pair |a|^2")->check(CLI::Range(0.0, 1.0));
  sweep->add_flag("--pair", v.pair, "two-photon run over the PDC marginal");
  sweep->add_option("--lmax", v.lmax, "largest crystal length in m")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--points", v.points, "grid point count")->check(CLI::Range(2, 100000000));
  sweep->add_option("--mode", v.mode, "correlation evaluation route")
      ->check(CLI::IsMember({"closed", "quad", "both"}));
  sweep->add_option("--out", v.out, "output path")->required();
  sweep->add_option("--format", v.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* figure = app.add_subcommand("figure", "reproduce a published curve set");
  figure->add_option("id", v.figure_id, "fig1|fig2|fig3a|fig3b")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3a", "fig3b"}));
  figure->add_option("--out", v.out, "output path (curve label appended)")->required();
  figure->add_option("--format", v.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

double env_quad_tol() {
  const char* env = std::getenv("DEPHASIM_TOL");
  if (!env || !*env) return kDefaultQuadTol;
  char* end = nullptr;
  const double tol = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(tol >= kMinQuadTol && tol <= kMaxQuadTol))
    fail(errc::usage_error,
         std::string("DEPHASIM_TOL must be a decimal in [1e-13, 1e-6], got: ") + env);
  return tol;
}

std::string with_suffix(const std::string& path, const std::string& label) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + "_" + label;
  return path.substr(0, dot) + "_" + label + path.substr(dot);
}

std::vector<std::pair<std::string, RunConfig>> figure_run_configs(const RunConfig& base) {
  std::vector<std::pair<std::string, RunConfig>> runs;
  const FigureId id = *base.figure;
  if (id == FigureId::Fig1 || id == FigureId::Fig2) {
    for (double alpha_sq : {0.1, 0.5, 0.8}) {
      RunConfig rc = base;
      rc.figure.reset();
      rc.spectrum =
          id == FigureId::Fig1 ? SpectrumKind::DoubleGaussian : SpectrumKind::DoubleLorentzian;
      rc.alpha_sq = alpha_sq;
      char label[32];
      std::snprintf(label, sizeof label, "alpha2_%.1f", alpha_sq);
      runs.emplace_back(label, rc);
    }
    return runs;
  }
  const std::pair<SpectrumKind, const char*> families[] = {
      {SpectrumKind::Gaussian, "gaussian"},
      {SpectrumKind::Lorentzian, "lorentzian"},
      {SpectrumKind::Rectangular, "rectangular"},
      {SpectrumKind::DoubleGaussian, "double_gaussian"},
      {SpectrumKind::DoubleLorentzian, "double_lorentzian"},
  };
  for (const auto& [kind, label] : families) {
    RunConfig rc = base;
    rc.figure.reset();
    rc.spectrum = kind;
    rc.pair = true;
    rc.a_sq = 0.5;
    runs.emplace_back(label, rc);
  }
  return runs;
}

}  // namespace

RunConfig parse_cli(const std::vector<std::string>& args) {
  CLI::App app{"birefringent phase-damping decoherence scans"};
  CliValues v;
  build_app(app, v);
  try {
    // CLI11 wants reversed argv-style input
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    fail(errc::usage_error, e.what());
  }

  RunConfig rc;
  rc.quad_tol = env_quad_tol();
  rc.out_path = v.out;
  rc.format = v.format == "json" ? OutputFormat::Json : OutputFormat::Csv;

  if (app.got_subcommand("figure")) {
    rc.figure = figure_from_string(v.figure_id);
    return rc;
  }

  if (v.spectrum.rfind("tabulated:", 0) == 0) {
    rc.spectrum = SpectrumKind::Tabulated;
    rc.tabulated_path = v.spectrum.substr(10);
    if (rc.tabulated_path.empty())
      fail(errc::usage_error, "tabulated spectrum needs a path: tabulated:<path>");
    if (!std::filesystem::exists(rc.tabulated_path))
      fail(errc::file_not_found, "tabulated spectrum file not found: " + rc.tabulated_path);
  } else {
    bool known = false;
    for (const auto& [name, kind] : spectrum_names()) {
      if (name == v.spectrum) {
        rc.spectrum = kind;
        known = true;
        break;
      }
    }
    if (!known) fail(errc::usage_error, "unknown spectrum: " + v.spectrum);
  }

  rc.k = v.k;
  rc.delta_n = v.delta_n;
  rc.width = v.width;
  rc.sep_widths = v.sep;
  rc.alpha_sq = v.alpha2;
  rc.a_sq = v.a2;
  rc.pair = v.pair;
  rc.lmax = v.lmax;
  rc.points = v.points;
  if (!v.mode.empty()) {
    if (v.mode == "closed") rc.mode = CorrelationMode::ClosedForm;
    else if (v.mode == "quad") rc.mode = CorrelationMode::Quadrature;
    else rc.mode = CorrelationMode::Both;
  }
  return rc;
}

CorrelationMode effective_mode(const RunConfig& config) {
  if (config.mode) return *config.mode;
  return config.spectrum == SpectrumKind::Tabulated ? CorrelationMode::Quadrature
                                                    : CorrelationMode::ClosedForm;
}

std::string canonical_config(const RunConfig& config) {
  std::ostringstream out;
  if (config.figure) {
    out << "figure " << to_string(*config.figure);
    out << " --format " << (config.format == OutputFormat::Json ? "json" : "csv");
    out << " --out " << config.out_path;
    return out.str();
  }
  out << "sweep --spectrum ";
  if (config.spectrum == SpectrumKind::Tabulated)
    out << "tabulated:" << config.tabulated_path;
  else
    out << to_string(config.spectrum);
  if (config.delta_n)
    out << " --delta-n " << format_double(*config.delta_n);
  else
    out << " --k " << format_double(config.k);
  out << " --width " << format_double(config.width);
  const bool has_sep = config.spectrum == SpectrumKind::DoubleGaussian ||
                       config.spectrum == SpectrumKind::DoubleLorentzian ||
                       config.spectrum == SpectrumKind::MultiDelta;
  if (has_sep && config.sep_widths) out << " --sep " << format_double(*config.sep_widths);
  if (config.pair)
    out << " --pair --a2 " << format_double(config.a_sq);
  else
    out << " --alpha2 " << format_double(config.alpha_sq);
  out << " --lmax " << format_double(config.lmax);
  out << " --points " << config.points;
  out << " --mode " << to_string(effective_mode(config));
  out << " --format " << (config.format == OutputFormat::Json ? "json" : "csv");
  out << " --out " << config.out_path;
  return out.str();
}

SweepConfig to_sweep_config(const RunConfig& config) {
  if (config.figure)
    fail(errc::invalid_config, "figure configs expand to several sweeps; resolve them first");

  SweepConfig cfg;
  const double width = config.width;
  const auto sep = [&](double factor) {
    return config.sep_widths ? *config.sep_widths * width : factor * width;
  };

  if (config.pair) {
    if (config.spectrum == SpectrumKind::Tabulated)
      fail(errc::usage_error, "pair runs need an analytic PDC marginal");
    std::optional<double> sep_rads;
    if (config.sep_widths) sep_rads = *config.sep_widths * width;
    cfg.spectrum =
        pdc_marginal(config.spectrum, kDefaultPumpFrequency, width, sep_rads).marginal;
    cfg.state = PairAmplitudes::from_population(config.a_sq);
  } else {
    switch (config.spectrum) {
      case SpectrumKind::White: cfg.spectrum = SpectrumEnvelope::white(); break;
      case SpectrumKind::Gaussian: cfg.spectrum = SpectrumEnvelope::gaussian(width); break;
      case SpectrumKind::Lorentzian: cfg.spectrum = SpectrumEnvelope::lorentzian(width); break;
      case SpectrumKind::Rectangular: cfg.spectrum = SpectrumEnvelope::rectangular(width); break;
      case SpectrumKind::MultiDelta:
        cfg.spectrum = SpectrumEnvelope::multi_delta_pair(sep(1.0));
        break;
      case SpectrumKind::DoubleGaussian:
        cfg.spectrum = SpectrumEnvelope::double_gaussian(width, sep(5.0));
        break;
      case SpectrumKind::DoubleLorentzian:
        cfg.spectrum = SpectrumEnvelope::double_lorentzian(width, sep(30.0));
        break;
      case SpectrumKind::Tabulated:
        cfg.spectrum = load_tabulated_csv(config.tabulated_path);
        break;
    }
    cfg.state = SingleAmplitudes::from_population(config.alpha_sq);
  }

  cfg.channel = config.delta_n ? ChannelParams::from_delta_n(*config.delta_n)
                               : ChannelParams::from_k(config.k, cfg.spectrum.width_scale());
  cfg.grid = LengthGrid{0.0, config.lmax, config.points};
  cfg.mode = effective_mode(config);
  cfg.quad_tol = config.quad_tol;
  return cfg;
}

void write_output(const SweepResult& result, const RunConfig& config, const std::string& path) {
  if (result.rows.empty()) fail(errc::invalid_config, "refusing to write an empty result");
  std::string body;
  const bool pair_run = result.rows.front().concurrence.has_value();

  if (config.format == OutputFormat::Csv) {
    std::ostringstream out;
    out << "l_m,re_F,im_F,abs_F,S_L,C\n";
    for (const auto& row : result.rows) {
      out << format_double(row.length) << ',' << format_double(row.correlation.real()) << ','
          << format_double(row.correlation.imag()) << ','
          << format_double(std::abs(row.correlation)) << ','
          << format_double(row.linear_entropy) << ',';
      if (row.concurrence) out << format_double(*row.concurrence);
      out << '\n';
    }
    out << "# events: kind,l_m,amplitude\n";
    for (const auto& ev : result.events)
      out << "# " << to_string(ev.kind) << ',' << format_double(ev.length) << ','
          << format_double(ev.amplitude) << '\n';
    out << "# config: " << canonical_config(config) << '\n';
    body = out.str();
  } else {
    nlohmann::json doc;
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : result.rows) {
      nlohmann::json r = {{"l_m", row.length},
                          {"re_F", row.correlation.real()},
                          {"im_F", row.correlation.imag()},
                          {"abs_F", std::abs(row.correlation)},
                          {"S_L", row.linear_entropy}};
      if (pair_run)
        r["C"] = *row.concurrence;
      else
        r["C"] = nullptr;
      doc["rows"].push_back(std::move(r));
    }
    doc["events"] = nlohmann::json::array();
    for (const auto& ev : result.events)
      doc["events"].push_back({{"kind", to_string(ev.kind)},
                               {"l_m", ev.length},
                               {"amplitude", ev.amplitude}});
    doc["config"] = canonical_config(config);
    body = doc.dump(2);
    body += '\n';
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(errc::io_error, "cannot open output file: " + path);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  out.flush();
  if (!out) fail(errc::io_error, "write failed: " + path);
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (const auto& a : args) {
    if (a == "--help" || a == "-h") {
      CLI::App app{"birefringent phase-damping decoherence scans"};
      CliValues v;
      build_app(app, v);
      std::cout << app.help();
      return 0;
    }
  }
  try {
    const RunConfig rc = parse_cli(args);
    if (rc.figure) {
      for (const auto& [label, curve_rc] : figure_run_configs(rc)) {
        const SweepResult result = run_sweep(to_sweep_config(curve_rc));
        RunConfig with_path = curve_rc;
        with_path.out_path = with_suffix(rc.out_path, label);
        write_output(result, with_path, with_path.out_path);
      }
    } else {
      const SweepResult result = run_sweep(to_sweep_config(rc));
      write_output(result, rc, rc.out_path);
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case errc::file_not_found:
        return 3;
      case errc::io_error:
        return 4;
      case errc::oracle_mismatch:
      case errc::not_converged:
        return 5;
      case errc::invalid_density_matrix:
      case errc::eigen_not_converged:
        return 1;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace dephasim
