#pragma once

// Inverse Morlet transform without an admissibility constant:
//
//   f(t) = Im[ integral_0^inf dw(a,b)/db da ] / sqrt(2 pi)
//
// discretized with finite differences along the shift axis and the
// trapezoidal rule along the scale axis. Restricting the shift window,
// the scale band, or multiplying the derivative by a binary mask yields
// individual oscillatory components.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "morlet/cwt.hpp"
#include "morlet/error.hpp"
#include "morlet/matrix.hpp"
#include "morlet/signal.hpp"

namespace morlet {

/// Binary selector C(a, b) with the same shape as a scalogram.
class ScalogramMask {
 public:
  explicit ScalogramMask(Matrix<std::uint8_t> mask) : mask_(std::move(mask)) {
    for (auto v : mask_.data())
      detail::require(v == 0 || v == 1, ErrorCode::invalid_mask, "mask entries must be 0 or 1");
  }

  static ScalogramMask filled(std::size_t rows, std::size_t cols, bool value) {
    return ScalogramMask(Matrix<std::uint8_t>(rows, cols, value ? 1 : 0));
  }

  std::size_t rows() const noexcept { return mask_.rows(); }
  std::size_t cols() const noexcept { return mask_.cols(); }
  bool operator()(std::size_t r, std::size_t c) const noexcept { return mask_(r, c) != 0; }
  const Matrix<std::uint8_t>& matrix() const noexcept { return mask_; }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (auto v : mask_.data()) n += v;
    return n;
  }

  ScalogramMask complement() const {
    Matrix<std::uint8_t> m = mask_;
    for (auto& v : m.data()) v = static_cast<std::uint8_t>(1 - v);
    return ScalogramMask(std::move(m));
  }

  friend ScalogramMask operator&(const ScalogramMask& x, const ScalogramMask& y) {
    detail::require(x.rows() == y.rows() && x.cols() == y.cols(), ErrorCode::dimension_mismatch,
                    "mask shapes differ");
    Matrix<std::uint8_t> m = x.mask_;
    auto other = y.mask_.data();
    auto out = m.data();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::uint8_t>(out[i] & other[i]);
    return ScalogramMask(std::move(m));
  }

 private:
  Matrix<std::uint8_t> mask_;
};

/// Rectangle in the shift/scale plane.
struct Region {
  double b_lo;
  double b_hi;
  double a_lo;
  double a_hi;

  Region(double b_lo_, double b_hi_, double a_lo_, double a_hi_)
      : b_lo(b_lo_), b_hi(b_hi_), a_lo(a_lo_), a_hi(a_hi_) {
    detail::require(std::isfinite(b_lo) && std::isfinite(b_hi) && b_lo < b_hi,
                    ErrorCode::invalid_region, "region needs b_lo < b_hi");
    detail::require(std::isfinite(a_lo) && std::isfinite(a_hi) && a_lo >= 0.0 && a_lo < a_hi,
                    ErrorCode::invalid_region, "region needs 0 <= a_lo < a_hi");
  }
};

/// Half-open index ranges of a region snapped outward onto the grids.
struct RegionIndices {
  std::size_t row_begin, row_end;
  std::size_t col_begin, col_end;
};

inline RegionIndices locate(const Scalogram& sg, const Region& r) {
  const TimeGrid& g = sg.grid();
  const ScaleGrid& a = sg.scales();
  const double t_tol = 1e-9 * g.dt();
  const double a_tol = 1e-9 * (a.back() - a.front());

  detail::require(r.b_hi >= g.start() - t_tol && r.b_lo <= g.end() + t_tol,
                  ErrorCode::empty_selection, "region shifts lie outside the time grid");
  detail::require(r.a_hi >= a.front() - a_tol && r.a_lo <= a.back() + a_tol,
                  ErrorCode::empty_selection, "region scales lie outside the scale grid");

  const auto last_col = static_cast<double>(g.size() - 1);
  const double x_lo = std::clamp(std::floor((r.b_lo - g.start()) / g.dt() + 1e-9), 0.0, last_col);
  const double x_hi = std::clamp(std::ceil((r.b_hi - g.start()) / g.dt() - 1e-9), 0.0, last_col);

  std::size_t k_lo = 0;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] <= r.a_lo + a_tol) k_lo = k;
  std::size_t k_hi = a.size() - 1;
  for (std::size_t k = a.size(); k-- > 0;)
    if (a[k] >= r.a_hi - a_tol) k_hi = k;

  RegionIndices idx{k_lo, k_hi + 1, static_cast<std::size_t>(x_lo),
                    static_cast<std::size_t>(x_hi) + 1};
  detail::require(idx.row_end - idx.row_begin >= 2, ErrorCode::empty_selection,
                  "region selects fewer than 2 scales");
  detail::require(idx.col_end - idx.col_begin >= 3, ErrorCode::empty_selection,
                  "region selects fewer than 3 shifts");
  return idx;
}

/// Sub-scalogram covering the (outward-snapped) region.
inline Scalogram restrict_to(const Scalogram& sg, const Region& r) {
  const RegionIndices idx = locate(sg, r);
  const auto all = sg.scales().values();
  std::vector<double> scales(all.begin() + static_cast<std::ptrdiff_t>(idx.row_begin),
                             all.begin() + static_cast<std::ptrdiff_t>(idx.row_end));
  return Scalogram(ScaleGrid(std::move(scales)),
                   sg.grid().window(static_cast<std::ptrdiff_t>(idx.col_begin),
                                    idx.col_end - idx.col_begin),
                   sg.w().block(idx.row_begin, idx.row_end - idx.row_begin, idx.col_begin,
                                idx.col_end - idx.col_begin),
                   sg.params());
}

/// Mask that is 1 inside the snapped region and 0 elsewhere.
inline ScalogramMask rectangle_mask(const Scalogram& sg, const Region& r) {
  const RegionIndices idx = locate(sg, r);
  Matrix<std::uint8_t> m(sg.scales().size(), sg.grid().size(), 0);
  for (std::size_t k = idx.row_begin; k < idx.row_end; ++k)
    for (std::size_t j = idx.col_begin; j < idx.col_end; ++j) m(k, j) = 1;
  return ScalogramMask(std::move(m));
}

/// dw/db: central differences inside, two-point one-sided at both ends.
inline ComplexMatrix d_db(const Scalogram& sg) {
  const std::size_t n = sg.grid().size();
  detail::require(n >= 3, ErrorCode::too_short, "d_db needs at least 3 shifts");
  const double dt = sg.grid().dt();
  const double d2t = 2.0 * dt;
  const auto& w = sg.w();
  ComplexMatrix dw(w.rows(), n);
  for (std::size_t k = 0; k < w.rows(); ++k) {
    dw(k, 0) = (w(k, 1) - w(k, 0)) / dt;
    for (std::size_t j = 1; j + 1 < n; ++j) dw(k, j) = (w(k, j + 1) - w(k, j - 1)) / d2t;
    dw(k, n - 1) = (w(k, n - 1) - w(k, n - 2)) / dt;
  }
  return dw;
}

namespace detail {

// Trapezoid over the scale abscissae, column by column. The mask, when
// given, multiplies the derivative before integration.
inline std::vector<cdouble> trapezoid_scales(const ComplexMatrix& dw, const ScaleGrid& a,
                                             const ScalogramMask* mask) {
  std::vector<cdouble> acc(dw.cols(), cdouble{});
  auto value = [&](std::size_t k, std::size_t j) {
    return mask == nullptr ? dw(k, j) : dw(k, j) * ((*mask)(k, j) ? 1.0 : 0.0);
  };
  for (std::size_t k = 0; k + 1 < a.size(); ++k) {
    const double half_h = 0.5 * (a[k + 1] - a[k]);
    for (std::size_t j = 0; j < dw.cols(); ++j) acc[j] += half_h * (value(k, j) + value(k + 1, j));
  }
  return acc;
}

inline RealSignal imaginary_part_scaled(const TimeGrid& grid, const std::vector<cdouble>& integral) {
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  std::vector<double> f(integral.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    f[j] = integral[j].imag() * inv_sqrt_2pi;
    require(std::isfinite(f[j]), ErrorCode::numerical_failure,
            "reconstruction produced NaN or Inf");
  }
  return RealSignal(grid, std::move(f));
}

inline void check_mask_shape(const Scalogram& sg, const ScalogramMask& m) {
  require(m.rows() == sg.scales().size() && m.cols() == sg.grid().size(),
          ErrorCode::dimension_mismatch, "mask shape does not match the scalogram");
}

}  // namespace detail

/// Complex scale integral of dw/db per shift. For a well-covered signal
/// this is i*sqrt(2 pi) times its analytic counterpart, so the modulus
/// divided by sqrt(2 pi) is the amplitude envelope.
inline std::vector<cdouble> scale_integral(const Scalogram& sg) {
  return detail::trapezoid_scales(d_db(sg), sg.scales(), nullptr);
}

inline std::vector<cdouble> scale_integral(const Scalogram& sg, const ScalogramMask& mask) {
  detail::check_mask_shape(sg, mask);
  return detail::trapezoid_scales(d_db(sg), sg.scales(), &mask);
}

/// Full reconstruction over every scale and shift of `sg`.
inline RealSignal icwt_full(const Scalogram& sg) {
  return detail::imaginary_part_scaled(sg.grid(), scale_integral(sg));
}

/// Reconstruction from the sub-scalogram inside `r`; the result lives on
/// the restricted time grid. Differences at the window edges become
/// one-sided.
inline RealSignal icwt_region(const Scalogram& sg, const Region& r) {
  return icwt_full(restrict_to(sg, r));
}

/// C(a,b) = 1 where |w(a,b)| > L * max|w|, else 0.
inline ScalogramMask threshold_mask(const Scalogram& sg, double level) {
  detail::require(std::isfinite(level) && level >= 0.0 && level <= 1.0,
                  ErrorCode::invalid_threshold, "threshold must lie in [0, 1]");
  const auto& w = sg.w();
  double peak = 0.0;
  for (const auto& v : w.data()) peak = std::max(peak, std::abs(v));
  const double cut = level * peak;
  Matrix<std::uint8_t> m(w.rows(), w.cols(), 0);
  for (std::size_t k = 0; k < w.rows(); ++k)
    for (std::size_t j = 0; j < w.cols(); ++j) m(k, j) = std::abs(w(k, j)) > cut ? 1 : 0;
  return ScalogramMask(std::move(m));
}

/// Reconstruction with the mask applied to dw/db (the derivative is taken
/// on the unmasked scalogram).
inline RealSignal icwt_masked(const Scalogram& sg, const ScalogramMask& mask) {
  return detail::imaginary_part_scaled(sg.grid(), scale_integral(sg, mask));
}

}  // namespace morlet
