#pragma once

// Sampled-signal model: uniform time grids, real and analytic signals,
// mean removal, power-of-two resampling, reflection padding and the
// analytic counterpart built by cutting off negative frequencies.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "morlet/error.hpp"
#include "morlet/fft.hpp"
#include "morlet/matrix.hpp"

namespace morlet {

/// Uniform sampling grid. Sample times are computed as
/// anchor + (offset + i) * dt so that padding and cropping never
/// accumulate rounding drift.
class TimeGrid {
 public:
  TimeGrid(double t_start, double dt, std::size_t n)
      : TimeGrid(t_start, 0, dt, n) {}

  double dt() const noexcept { return dt_; }
  std::size_t size() const noexcept { return n_; }
  double time(std::ptrdiff_t i) const noexcept {
    return anchor_ + static_cast<double>(offset_ + i) * dt_;
  }
  double start() const noexcept { return time(0); }
  double end() const noexcept { return time(static_cast<std::ptrdiff_t>(n_) - 1); }

  std::vector<double> times() const {
    std::vector<double> t(n_);
    for (std::size_t i = 0; i < n_; ++i) t[i] = time(static_cast<std::ptrdiff_t>(i));
    return t;
  }

  /// Grid of `n` samples starting `first` samples after this one's start
  /// (negative `first` extends to the left). Shares the anchor.
  TimeGrid window(std::ptrdiff_t first, std::size_t n) const {
    return TimeGrid(anchor_, offset_ + first, dt_, n);
  }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  TimeGrid(double anchor, std::ptrdiff_t offset, double dt, std::size_t n)
      : anchor_(anchor), offset_(offset), dt_(dt), n_(n) {
    detail::require(std::isfinite(anchor) && std::isfinite(dt) && dt > 0.0,
                    ErrorCode::invalid_grid, "time grid needs finite start and dt > 0");
    detail::require(n >= 2, ErrorCode::invalid_grid, "time grid needs at least 2 samples");
  }

  double anchor_;
  std::ptrdiff_t offset_;
  double dt_;
  std::size_t n_;
};

namespace detail {

template <class V>
void check_samples(const TimeGrid& grid, const std::vector<V>& values) {
  require(values.size() == grid.size(), ErrorCode::length_mismatch,
          "signal has " + std::to_string(values.size()) + " values for a grid of " +
              std::to_string(grid.size()));
  for (const auto& v : values) {
    if constexpr (std::is_floating_point_v<V>) {
      require(std::isfinite(v), ErrorCode::non_finite, "signal contains NaN or Inf");
    } else {
      require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorCode::non_finite,
              "signal contains NaN or Inf");
    }
  }
}

inline bool is_pow2(std::size_t n) noexcept { return std::has_single_bit(n); }

}  // namespace detail

class RealSignal {
 public:
  RealSignal(TimeGrid grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {
    detail::check_samples(grid_, values_);
  }

  const TimeGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

 private:
  TimeGrid grid_;
  std::vector<double> values_;
};

class AnalyticSignal {
 public:
  /// Checks length and finiteness only; see from_samples() for the
  /// spectral check.
  AnalyticSignal(TimeGrid grid, std::vector<cdouble> values)
      : grid_(grid), values_(std::move(values)) {
    detail::check_samples(grid_, values_);
  }

  /// Accepts samples only if their negative-frequency spectrum is below
  /// `tolerance` relative to the spectral peak.
  static AnalyticSignal from_samples(TimeGrid grid, std::vector<cdouble> values,
                                     double tolerance = 1e-10);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::span<const cdouble> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  cdouble operator[](std::size_t i) const noexcept { return values_[i]; }

 private:
  TimeGrid grid_;
  std::vector<cdouble> values_;
};

/// Largest |X[k]| over strictly negative bins (k > N/2) divided by the
/// largest |X[k]| overall; 0 for an all-zero signal.
inline double negative_frequency_leakage(std::span<const cdouble> values) {
  const auto spec = fft::forward(values);
  const std::size_t n = spec.size();
  double peak = 0.0;
  double negative = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double m = std::abs(spec[k]);
    peak = std::max(peak, m);
    if (k > n / 2) negative = std::max(negative, m);
  }
  return peak > 0.0 ? negative / peak : 0.0;
}

inline AnalyticSignal AnalyticSignal::from_samples(TimeGrid grid, std::vector<cdouble> values,
                                                   double tolerance) {
  AnalyticSignal s(grid, std::move(values));
  detail::require(negative_frequency_leakage(s.values()) <= tolerance,
                  ErrorCode::not_analytic, "samples have negative-frequency content");
  return s;
}

/// Subtracts the arithmetic mean. A second pass removes the rounding
/// residue of the first.
inline RealSignal remove_mean(const RealSignal& s) {
  std::vector<double> v(s.values().begin(), s.values().end());
  for (int pass = 0; pass < 2; ++pass) {
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / static_cast<double>(v.size());
    for (double& x : v) x -= mean;
  }
  return RealSignal(s.grid(), std::move(v));
}

/// Linear interpolation onto the smallest power-of-two number of samples
/// spanning the same [start, end] interval. Power-of-two input is
/// returned unchanged.
inline RealSignal resample_pow2(const RealSignal& s) {
  const std::size_t n = s.size();
  if (detail::is_pow2(n)) return s;
  const std::size_t m = std::bit_ceil(n);
  const TimeGrid& g = s.grid();
  const double dt = (g.end() - g.start()) / static_cast<double>(m - 1);

  // Position j maps to source index j*(n-1)/(m-1); integer arithmetic
  // keeps both endpoints exact.
  std::vector<double> out(m);
  const auto span = static_cast<std::uint64_t>(n - 1);
  const auto denom = static_cast<std::uint64_t>(m - 1);
  for (std::size_t j = 0; j < m; ++j) {
    const std::uint64_t num = static_cast<std::uint64_t>(j) * span;
    const std::size_t i = static_cast<std::size_t>(num / denom);
    const double frac = static_cast<double>(num % denom) / static_cast<double>(denom);
    out[j] = (i + 1 < n) ? s[i] + frac * (s[i + 1] - s[i]) : s[i];
  }
  return RealSignal(TimeGrid(g.start(), dt, m), std::move(out));
}

/// Whole-sample mirror padding to length 2N: N/2 samples on each side,
/// reflected about the first and last samples without repeating them.
inline RealSignal reflect_extend(const RealSignal& s) {
  const std::size_t n = s.size();
  detail::require(detail::is_pow2(n), ErrorCode::not_power_of_two,
                  "reflect_extend needs a power-of-two length, got " + std::to_string(n));
  detail::require(n >= 4, ErrorCode::too_short, "reflect_extend needs at least 4 samples");
  const std::size_t half = n / 2;
  std::vector<double> out(2 * n);
  for (std::size_t i = 0; i < half; ++i) out[i] = s[half - i];               // s[N/2] .. s[1]
  for (std::size_t i = 0; i < n; ++i) out[half + i] = s[i];
  for (std::size_t i = 0; i < half; ++i) out[half + n + i] = s[n - 2 - i];   // s[N-2] .. s[N/2-1]
  return RealSignal(s.grid().window(-static_cast<std::ptrdiff_t>(half), 2 * n), std::move(out));
}

namespace detail {

inline std::size_t crop_offset(std::size_t length) {
  require(length % 2 == 0, ErrorCode::odd_length,
          "crop_center needs an even length, got " + std::to_string(length));
  require(length >= 4, ErrorCode::too_short, "crop_center needs at least 4 samples");
  return length / 4;
}

}  // namespace detail

/// Middle half of a length-2N signal: samples N/2 .. 3N/2-1.
inline RealSignal crop_center(const RealSignal& s) {
  const std::size_t off = detail::crop_offset(s.size());
  const std::size_t n = s.size() / 2;
  std::vector<double> out(s.values().begin() + off, s.values().begin() + off + n);
  return RealSignal(s.grid().window(static_cast<std::ptrdiff_t>(off), n), std::move(out));
}

/// Analytic counterpart: doubles bins 1..N/2-1, zeroes DC, Nyquist and all
/// negative bins. The mean is removed first.
inline AnalyticSignal analytic_signal(const RealSignal& s) {
  const std::size_t n = s.size();
  detail::require(n % 2 == 0, ErrorCode::odd_length,
                  "analytic_signal needs an even length, got " + std::to_string(n));
  const RealSignal centered = remove_mean(s);
  auto spec = fft::forward(centered.values());
  spec[0] = 0.0;
  for (std::size_t k = 1; k < n / 2; ++k) spec[k] *= 2.0;
  for (std::size_t k = n / 2; k < n; ++k) spec[k] = 0.0;
  return AnalyticSignal(s.grid(), fft::inverse(spec));
}

}  // namespace morlet
