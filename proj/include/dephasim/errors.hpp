#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace dephasim {

// Every failure mode the library surfaces, one code per contract violation.
enum class errc {
  kind_has_no_density,         // White / MultiDelta have no pointwise density
  empty_or_unsorted,           // tabulated samples missing or not strictly increasing
  all_zero,                    // tabulated samples carry no mass
  unsupported_kind,            // operation not defined for this spectrum family
  tabulated_needs_quadrature,  // no closed-form correlation for tabulated spectra
  white_is_singular,           // white spectrum has no integrable density
  not_converged,               // quadrature budget exhausted
  not_normalized,              // amplitudes or weights fail their normalization
  correlation_out_of_range,    // |F| > 1 beyond tolerance
  invalid_density_matrix,      // Hermiticity / trace / positivity violated
  eigen_not_converged,         // Jacobi sweep limit hit
  oracle_mismatch,             // closed form vs quadrature disagree in Both mode
  invalid_config,              // sweep or run configuration rejected
  usage_error,                 // CLI argument errors
  file_not_found,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

// Carries the best available estimate so callers can decide whether the
// achieved bound is still useful.
class NotConvergedError : public Error {
 public:
  NotConvergedError(std::complex<double> best_estimate, double error_bound,
                    const std::string& what)
      : Error(errc::not_converged, what),
        best_estimate_(best_estimate),
        error_bound_(error_bound) {}
  std::complex<double> best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  std::complex<double> best_estimate_;
  double error_bound_;
};

class OracleMismatchError : public Error {
 public:
  OracleMismatchError(double worst_length, double worst_deviation, const std::string& what)
      : Error(errc::oracle_mismatch, what),
        worst_length_(worst_length),
        worst_deviation_(worst_deviation) {}
  double worst_length() const noexcept { return worst_length_; }
  double worst_deviation() const noexcept { return worst_deviation_; }

 private:
  double worst_length_;
  double worst_deviation_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace dephasim
