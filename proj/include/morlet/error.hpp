#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace morlet {

/// Stable error codes. Numeric values are part of the CLI contract and
/// must not be renumbered.
enum class ErrorCode : int {
  // signal model
  invalid_grid = 101,
  length_mismatch = 102,
  non_finite = 103,
  not_power_of_two = 104,
  too_short = 105,
  odd_length = 106,
  not_analytic = 107,
  // transform
  invalid_omega0 = 201,
  invalid_scales = 202,
  dimension_mismatch = 203,
  // reconstruction
  invalid_region = 301,
  empty_selection = 302,
  invalid_threshold = 303,
  invalid_mask = 304,
  // generators
  invalid_fourier_spec = 401,
  unknown_generator = 402,
  // run configuration
  config_scale_range = 501,
  config_scale_count = 502,
  config_threshold = 503,
  config_region = 504,
  config_omega0 = 505,
  config_boundary = 506,
  // files
  malformed_csv = 601,
  non_uniform_sampling = 602,
  io_failure = 603,
  malformed_meta = 604,
  // produced a NaN/Inf while computing
  numerical_failure = 900,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_grid: return "invalid_grid";
    case ErrorCode::length_mismatch: return "length_mismatch";
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::not_power_of_two: return "not_power_of_two";
    case ErrorCode::too_short: return "too_short";
    case ErrorCode::odd_length: return "odd_length";
    case ErrorCode::not_analytic: return "not_analytic";
    case ErrorCode::invalid_omega0: return "invalid_omega0";
    case ErrorCode::invalid_scales: return "invalid_scales";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::invalid_region: return "invalid_region";
    case ErrorCode::empty_selection: return "empty_selection";
    case ErrorCode::invalid_threshold: return "invalid_threshold";
    case ErrorCode::invalid_mask: return "invalid_mask";
    case ErrorCode::invalid_fourier_spec: return "invalid_fourier_spec";
    case ErrorCode::unknown_generator: return "unknown_generator";
    case ErrorCode::config_scale_range: return "config_scale_range";
    case ErrorCode::config_scale_count: return "config_scale_count";
    case ErrorCode::config_threshold: return "config_threshold";
    case ErrorCode::config_region: return "config_region";
    case ErrorCode::config_omega0: return "config_omega0";
    case ErrorCode::config_boundary: return "config_boundary";
    case ErrorCode::malformed_csv: return "malformed_csv";
    case ErrorCode::non_uniform_sampling: return "non_uniform_sampling";
    case ErrorCode::io_failure: return "io_failure";
    case ErrorCode::malformed_meta: return "malformed_meta";
    case ErrorCode::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Process exit status for a failure: 3 for numerical failures, 2 otherwise.
constexpr int exit_status(ErrorCode code) noexcept {
  return code == ErrorCode::numerical_failure ? 3 : 2;
}

namespace detail {

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace detail
}  // namespace morlet
