#pragma once

// Synthetic signals and brute-force reference transforms. The references
// evaluate the Fourier-series form of the transform term by term, with no
// FFT and no finite differences, so they are independent of the
// production path in cwt.hpp / icwt.hpp.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "morlet/cwt.hpp"
#include "morlet/error.hpp"
#include "morlet/signal.hpp"

namespace morlet::testgen {

struct FourierTerm {
  int harmonic;   // n >= 1
  double cos_coef;  // A_n
  double sin_coef;  // B_n
};

/// f(t) = sum A_n cos(w_n t) + B_n sin(w_n t), w_n = 2 pi n / period.
class FourierSeriesSpec {
 public:
  FourierSeriesSpec(double period, std::vector<FourierTerm> terms)
      : period_(period), terms_(std::move(terms)) {
    detail::require(std::isfinite(period) && period > 0.0, ErrorCode::invalid_fourier_spec,
                    "period must be finite and positive");
    std::set<int> seen;
    for (const auto& t : terms_) {
      detail::require(t.harmonic >= 1, ErrorCode::invalid_fourier_spec,
                      "harmonic index must be >= 1");
      detail::require(seen.insert(t.harmonic).second, ErrorCode::invalid_fourier_spec,
                      "duplicate harmonic index " + std::to_string(t.harmonic));
      detail::require(std::isfinite(t.cos_coef) && std::isfinite(t.sin_coef),
                      ErrorCode::invalid_fourier_spec, "coefficients must be finite");
    }
  }

  double period() const noexcept { return period_; }
  const std::vector<FourierTerm>& terms() const noexcept { return terms_; }

  double omega(const FourierTerm& t) const noexcept {
    return 2.0 * std::numbers::pi * t.harmonic / period_;
  }
  /// C_n = A_n - i B_n.
  static cdouble coefficient(const FourierTerm& t) noexcept { return {t.cos_coef, -t.sin_coef}; }

 private:
  double period_;
  std::vector<FourierTerm> terms_;
};

inline RealSignal synth_fourier(const FourierSeriesSpec& spec, const TimeGrid& grid) {
  std::vector<double> v(grid.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double t = grid.time(static_cast<std::ptrdiff_t>(i));
    for (const auto& term : spec.terms()) {
      const double wt = spec.omega(term) * t;
      v[i] += term.cos_coef * std::cos(wt) + term.sin_coef * std::sin(wt);
    }
  }
  return RealSignal(grid, std::move(v));
}

/// K random terms with distinct harmonics in [1, max_harmonic] and
/// standard-normal coefficients.
inline FourierSeriesSpec random_fourier_spec(std::mt19937_64& rng, std::size_t k, int max_harmonic,
                                             double period = 1.0) {
  std::uniform_int_distribution<int> pick(1, max_harmonic);
  std::normal_distribution<double> coef(0.0, 1.0);
  std::set<int> used;
  std::vector<FourierTerm> terms;
  while (terms.size() < k) {
    const int h = pick(rng);
    if (!used.insert(h).second) continue;
    terms.push_back({h, coef(rng), coef(rng)});
  }
  return FourierSeriesSpec(period, std::move(terms));
}

struct TestSignalOptions {
  /// 0 selects the sharp indicator on [1/3, 2/3]. A positive value replaces
  /// each edge by a linear ramp this many samples wide (outside the
  /// interval), so the gate has no jump.
  double taper_samples = 0.0;
};

/// exp(-4t) cos(20 pi t) + chi_[1/3, 2/3](t) sin(40 pi t).
inline RealSignal synth_test_signal(const TimeGrid& grid, TestSignalOptions opts = {}) {
  constexpr double pi = std::numbers::pi;
  constexpr double t_on = 1.0 / 3.0;
  constexpr double t_off = 2.0 / 3.0;
  const double width = opts.taper_samples * grid.dt();
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double t = grid.time(static_cast<std::ptrdiff_t>(i));
    double gate = (t >= t_on && t <= t_off) ? 1.0 : 0.0;
    if (width > 0.0) {
      if (t < t_on && t > t_on - width) gate = 1.0 - (t_on - t) / width;
      if (t > t_off && t < t_off + width) gate = 1.0 - (t - t_off) / width;
    }
    const double decaying = std::exp(-4.0 * t) * std::cos(20.0 * pi * t);
    v[i] = gate == 0.0 ? decaying : decaying + gate * std::sin(40.0 * pi * t);
  }
  return RealSignal(grid, std::move(v));
}

/// Term-by-term w(a,b) = sum C_n exp(-(w_n a - w0)^2/2) exp(i w_n b).
inline Scalogram oracle_cwt_series(const FourierSeriesSpec& spec, const ScaleGrid& scales,
                                   const TimeGrid& grid, const MorletParams& params = MorletParams{}) {
  ComplexMatrix w(scales.size(), grid.size());
  for (const auto& term : spec.terms()) {
    const double om = spec.omega(term);
    const cdouble c = FourierSeriesSpec::coefficient(term);
    for (std::size_t k = 0; k < scales.size(); ++k) {
      const double u = om * scales[k] - params.omega0();
      const cdouble ck = c * std::exp(-0.5 * u * u);
      for (std::size_t j = 0; j < grid.size(); ++j)
        w(k, j) += ck * std::polar(1.0, om * grid.time(static_cast<std::ptrdiff_t>(j)));
    }
  }
  return Scalogram(scales, grid, std::move(w), params);
}

/// Composite Simpson rule for integral of exp(-(omega a - omega0)^2/2) over
/// the span of `scales`, with `refine` (even) panels per grid interval.
inline double gaussian_scale_integral(double omega, double omega0, const ScaleGrid& scales,
                                      int refine = 16) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < scales.size(); ++k) {
    const double lo = scales[k];
    const double h = (scales[k + 1] - lo) / refine;
    double s = harmonic_response(lo, omega, omega0) + harmonic_response(scales[k + 1], omega, omega0);
    for (int i = 1; i < refine; ++i)
      s += (i % 2 == 1 ? 4.0 : 2.0) * harmonic_response(lo + i * h, omega, omega0);
    total += s * h / 3.0;
  }
  return total;
}

/// Im[ integral over the scale span of dw/db ] / sqrt(2 pi) with the scale
/// integral done by fine quadrature on the closed-form integrand
/// i w_n C_n exp(-(w_n a - w0)^2/2) exp(i w_n b). Isolates scale
/// truncation error from differencing error.
inline RealSignal oracle_icwt_series(const FourierSeriesSpec& spec, const ScaleGrid& scales,
                                     const TimeGrid& grid, const MorletParams& params = MorletParams{}) {
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  std::vector<cdouble> integral_per_term;
  for (const auto& term : spec.terms()) {
    const double om = spec.omega(term);
    const double g = gaussian_scale_integral(om, params.omega0(), scales);
    integral_per_term.push_back(cdouble(0.0, om) * FourierSeriesSpec::coefficient(term) * g);
  }
  std::vector<double> f(grid.size(), 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double b = grid.time(static_cast<std::ptrdiff_t>(j));
    cdouble acc{};
    for (std::size_t i = 0; i < spec.terms().size(); ++i)
      acc += integral_per_term[i] * std::polar(1.0, spec.omega(spec.terms()[i]) * b);
    f[j] = acc.imag() * inv_sqrt_2pi;
  }
  return RealSignal(grid, std::move(f));
}

}  // namespace morlet::testgen
