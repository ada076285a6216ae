#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dephasim/sweep.hpp"

namespace dephasim {

enum class OutputFormat { Csv, Json };

// Parsed command line. Exactly one of figure / explicit sweep parameters
// drives the run; everything carries a documented default so the canonical
// serialization is total.
struct RunConfig {
  std::optional<FigureId> figure;

  SpectrumKind spectrum = SpectrumKind::Gaussian;
  std::string tabulated_path;           // spectrum == Tabulated
  double k = 500.0;                     // 1/m
  std::optional<double> delta_n;        // overrides k when given
  double width = 1e12;                  // rad/s
  std::optional<double> sep_widths;     // separation as a multiple of width
  double alpha_sq = 0.5;                // single-photon |alpha|^2
  double a_sq = 0.5;                    // pair |a|^2
  bool pair = false;
  double lmax = 0.02;                   // m
  int points = 2001;
  std::optional<CorrelationMode> mode;  // default: closed (quad for tabulated)
  std::string out_path;
  OutputFormat format = OutputFormat::Csv;
  double quad_tol = kDefaultQuadTol;    // DEPHASIM_TOL override
};

// argv without the program name. Throws Error(usage_error) on bad flags or
// values, file_not_found for a missing tabulated file.
RunConfig parse_cli(const std::vector<std::string>& args);

// Canonical argument string: parsing it back yields an equivalent RunConfig.
std::string canonical_config(const RunConfig& config);

CorrelationMode effective_mode(const RunConfig& config);
SweepConfig to_sweep_config(const RunConfig& config);

// Writes rows, the event block and the canonical config to path. CSV columns
// are l_m,re_F,im_F,abs_F,S_L,C (C empty on single-photon runs); JSON mirrors
// the same schema under rows/events/config. Deterministic: identical inputs
// produce byte-identical files.
void write_output(const SweepResult& result, const RunConfig& config, const std::string& path);

// Full orchestration for the command-line tool. Exit codes: 0 success,
// 2 usage, 3 missing input file, 4 output I/O, 5 oracle mismatch or
// non-convergence, 1 anything else.
int run_cli(int argc, const char* const* argv);

}  // namespace dephasim
