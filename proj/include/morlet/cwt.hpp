#pragma once

// Forward continuous wavelet transform with the standard Morlet wavelet
// exp(i w0 x - x^2/2) in the amplitude norm. Each scale row is a Gaussian
// window exp(-(a w - w0)^2 / 2) applied to the spectrum of the analytic
// signal, so a unit harmonic exp(i w t) maps to exp(i w b) times that
// window and has unit modulus on the ridge a = w0 / w.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "morlet/error.hpp"
#include "morlet/fft.hpp"
#include "morlet/matrix.hpp"
#include "morlet/signal.hpp"

namespace morlet {

class MorletParams {
 public:
  static constexpr double default_omega0 = 2.0 * std::numbers::pi;

  explicit MorletParams(double omega0 = default_omega0) : omega0_(omega0) {
    detail::require(std::isfinite(omega0) && omega0 > 0.0, ErrorCode::invalid_omega0,
                    "omega0 must be finite and positive");
  }

  double omega0() const noexcept { return omega0_; }

 private:
  double omega0_;
};

/// Strictly increasing, non-negative scales. Spacing may be non-uniform.
class ScaleGrid {
 public:
  explicit ScaleGrid(std::vector<double> scales) : scales_(std::move(scales)) {
    detail::require(scales_.size() >= 2, ErrorCode::invalid_scales,
                    "scale grid needs at least 2 scales");
    for (std::size_t k = 0; k < scales_.size(); ++k) {
      detail::require(std::isfinite(scales_[k]) && scales_[k] >= 0.0, ErrorCode::invalid_scales,
                      "scales must be finite and non-negative");
      if (k > 0)
        detail::require(scales_[k] > scales_[k - 1], ErrorCode::invalid_scales,
                        "scales must be strictly increasing");
    }
  }

  /// MATLAB-style linspace: lo + k*(hi-lo)/(count-1), last point exactly hi.
  static ScaleGrid linspace(double lo, double hi, std::size_t count) {
    detail::require(count >= 2, ErrorCode::invalid_scales, "linspace needs count >= 2");
    std::vector<double> a(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k + 1 < count; ++k) a[k] = lo + static_cast<double>(k) * step;
    a[count - 1] = hi;
    return ScaleGrid(std::move(a));
  }

  std::size_t size() const noexcept { return scales_.size(); }
  double operator[](std::size_t k) const noexcept { return scales_[k]; }
  std::span<const double> values() const noexcept { return scales_; }
  double front() const noexcept { return scales_.front(); }
  double back() const noexcept { return scales_.back(); }

  friend bool operator==(const ScaleGrid&, const ScaleGrid&) = default;

 private:
  std::vector<double> scales_;
};

/// Complex w(a, b): one row per scale, one column per shift.
class Scalogram {
 public:
  Scalogram(ScaleGrid scales, TimeGrid grid, ComplexMatrix w, MorletParams params)
      : scales_(std::move(scales)), grid_(grid), w_(std::move(w)), params_(params) {
    detail::require(w_.rows() == scales_.size() && w_.cols() == grid_.size(),
                    ErrorCode::dimension_mismatch,
                    "scalogram is " + std::to_string(w_.rows()) + "x" + std::to_string(w_.cols()) +
                        " but grids are " + std::to_string(scales_.size()) + "x" +
                        std::to_string(grid_.size()));
    for (const auto& v : w_.data())
      detail::require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorCode::non_finite,
                      "scalogram contains NaN or Inf");
  }

  const ScaleGrid& scales() const noexcept { return scales_; }
  const TimeGrid& grid() const noexcept { return grid_; }
  const ComplexMatrix& w() const noexcept { return w_; }
  const MorletParams& params() const noexcept { return params_; }
  double omega0() const noexcept { return params_.omega0(); }
  cdouble operator()(std::size_t scale, std::size_t shift) const noexcept {
    return w_(scale, shift);
  }

 private:
  ScaleGrid scales_;
  TimeGrid grid_;
  ComplexMatrix w_;
  MorletParams params_;
};

/// How bin spacing is derived. `exact_dft` uses 2pi/(N dt); `endpoint_span`
/// uses 2pi/((N-1) dt), i.e. 2pi over t_end - t_start. The latter is off by
/// N/(N-1) and is kept only for comparing against legacy outputs.
enum class FrequencyNorm { exact_dft, endpoint_span };

/// Angular frequency of each DFT bin in FFT order:
/// [0, 1, .., N/2, -N/2+1, .., -1] * spacing.
inline std::vector<double> frequency_grid(const TimeGrid& grid,
                                          FrequencyNorm norm = FrequencyNorm::exact_dft) {
  const std::size_t n = grid.size();
  detail::require(n % 2 == 0, ErrorCode::odd_length,
                  "frequency_grid needs an even length, got " + std::to_string(n));
  const double span = norm == FrequencyNorm::exact_dft ? static_cast<double>(n) * grid.dt()
                                                       : grid.end() - grid.start();
  const double spacing = 2.0 * std::numbers::pi / span;
  std::vector<double> omega(n);
  for (std::size_t k = 0; k <= n / 2; ++k) omega[k] = static_cast<double>(k) * spacing;
  for (std::size_t k = n / 2 + 1; k < n; ++k)
    omega[k] = (static_cast<double>(k) - static_cast<double>(n)) * spacing;
  return omega;
}

/// Closed-form ridge profile exp(-(a*omega - omega0)^2 / 2).
inline double harmonic_response(double a, double omega, double omega0) {
  const double u = a * omega - omega0;
  return std::exp(-0.5 * u * u);
}

/// Scale rows are independent; the function is reentrant and may be called
/// concurrently.
inline Scalogram cwt_forward(const AnalyticSignal& fa, const ScaleGrid& scales,
                             const MorletParams& params = MorletParams{},
                             FrequencyNorm norm = FrequencyNorm::exact_dft) {
  const std::size_t n = fa.size();
  const auto omega = frequency_grid(fa.grid(), norm);
  const auto spectrum = fft::forward(fa.values());
  const double omega0 = params.omega0();
  const double inv_n = 1.0 / static_cast<double>(n);

  ComplexMatrix w(scales.size(), n);
  fft::Plan backward(n, fft::Direction::backward);
  std::vector<cdouble> windowed(n);
  for (std::size_t k = 0; k < scales.size(); ++k) {
    const double a = scales[k];
    auto row = w.row(k);
    if (a == 0.0) {
      // Limit of the window for a -> 0.
      const double g = std::exp(-0.5 * omega0 * omega0);
      for (std::size_t j = 0; j < n; ++j) row[j] = fa[j] * g;
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) windowed[j] = spectrum[j] * harmonic_response(a, omega[j], omega0);
    backward.execute(windowed, row);
    for (auto& v : row) v *= inv_n;
  }
  for (const auto& v : w.data())
    detail::require(std::isfinite(v.real()) && std::isfinite(v.imag()),
                    ErrorCode::numerical_failure, "cwt_forward produced NaN or Inf");
  return Scalogram(scales, fa.grid(), std::move(w), params);
}

/// Same shift window of every row (the middle half of a reflected
/// transform), keeping all scales.
inline Scalogram crop_center(const Scalogram& sg) {
  const std::size_t off = detail::crop_offset(sg.grid().size());
  const std::size_t n = sg.grid().size() / 2;
  return Scalogram(sg.scales(), sg.grid().window(static_cast<std::ptrdiff_t>(off), n),
                   sg.w().block(0, sg.scales().size(), off, n), sg.params());
}

enum class RidgeStatus { ok, undefined_frequency, no_ridge };

struct RidgePoint {
  double shift = 0.0;
  RidgeStatus status = RidgeStatus::no_ridge;
  std::size_t scale_index = 0;
  double scale = std::numeric_limits<double>::quiet_NaN();
  /// omega0 / scale; +inf when the maximum sits at scale 0.
  double frequency = std::numeric_limits<double>::quiet_NaN();
};

/// Per-column modulus maximum over scales; ties resolve to the smaller scale.
inline std::vector<RidgePoint> ridge_extract(const Scalogram& sg) {
  const auto& w = sg.w();
  std::vector<RidgePoint> ridge(w.cols());
  for (std::size_t j = 0; j < w.cols(); ++j) {
    RidgePoint& p = ridge[j];
    p.shift = sg.grid().time(static_cast<std::ptrdiff_t>(j));
    double best = 0.0;
    for (std::size_t k = 0; k < w.rows(); ++k) {
      const double m = std::abs(w(k, j));
      if (m > best) {
        best = m;
        p.scale_index = k;
      }
    }
    if (best == 0.0) continue;
    p.scale = sg.scales()[p.scale_index];
    if (p.scale == 0.0) {
      p.status = RidgeStatus::undefined_frequency;
      p.frequency = std::numeric_limits<double>::infinity();
    } else {
      p.status = RidgeStatus::ok;
      p.frequency = sg.omega0() / p.scale;
    }
  }
  return ridge;
}

}  // namespace morlet
