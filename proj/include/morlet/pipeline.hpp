#pragma once

// End-to-end runs used by the command-line tool.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "morlet/cwt.hpp"
#include "morlet/error.hpp"
#include "morlet/icwt.hpp"
#include "morlet/io.hpp"
#include "morlet/signal.hpp"

namespace morlet {

struct RunConfig {
  double omega0 = MorletParams::default_omega0;
  double scale_min = 0.0;
  double scale_max = 0.2;
  long scale_count = 51;
  std::optional<double> threshold;
  std::optional<Region> region;
  io::BoundaryMode boundary_mode = io::BoundaryMode::reflect;
  bool compat_freq_norm = false;

  FrequencyNorm frequency_norm() const {
    return compat_freq_norm ? FrequencyNorm::endpoint_span : FrequencyNorm::exact_dft;
  }

  void validate() const {
    using detail::require;
    require(std::isfinite(omega0) && omega0 > 0.0, ErrorCode::config_omega0,
            "--omega0 must be finite and positive");
    require(std::isfinite(scale_min) && std::isfinite(scale_max) && scale_min >= 0.0 &&
                scale_min < scale_max,
            ErrorCode::config_scale_range, "need 0 <= --a-min < --a-max");
    require(scale_count >= 2, ErrorCode::config_scale_count, "--a-count must be >= 2");
    if (threshold)
      require(std::isfinite(*threshold) && *threshold >= 0.0 && *threshold <= 1.0,
              ErrorCode::config_threshold, "--threshold must lie in [0, 1]");
  }

  ScaleGrid scales() const {
    return ScaleGrid::linspace(scale_min, scale_max, static_cast<std::size_t>(scale_count));
  }
};

/// remove_mean -> resample_pow2 -> [reflect_extend] -> analytic_signal ->
/// cwt_forward -> [crop_center]. Bracketed steps run in reflect mode only.
inline Scalogram transform(const RealSignal& input, const RunConfig& cfg,
                           std::vector<std::string>* steps = nullptr) {
  cfg.validate();
  detail::require(input.size() >= 4, ErrorCode::too_short, "transform needs at least 4 samples");
  auto log = [&](const char* s) {
    if (steps) steps->emplace_back(s);
  };
  const RealSignal centered = remove_mean(input);
  log("remove_mean");
  const RealSignal sampled = resample_pow2(centered);
  log("resample_pow2");
  const bool reflect = cfg.boundary_mode == io::BoundaryMode::reflect;
  const RealSignal work = reflect ? reflect_extend(sampled) : sampled;
  if (reflect) log("reflect_extend");
  const AnalyticSignal fa = analytic_signal(work);
  log("analytic_signal");
  Scalogram sg = cwt_forward(fa, cfg.scales(), MorletParams(cfg.omega0), cfg.frequency_norm());
  log("cwt_forward");
  if (!reflect) return sg;
  log("crop_center");
  return crop_center(sg);
}

/// Places `part` on `full` (same step, aligned samples) with zeros elsewhere.
inline RealSignal zero_pad_to(const RealSignal& part, const TimeGrid& full) {
  const double pos = (part.grid().start() - full.start()) / full.dt();
  const auto first = static_cast<std::ptrdiff_t>(std::llround(pos));
  detail::require(first >= 0 && static_cast<std::size_t>(first) + part.size() <= full.size(),
                  ErrorCode::dimension_mismatch, "window does not fit inside the full grid");
  std::vector<double> v(full.size(), 0.0);
  for (std::size_t i = 0; i < part.size(); ++i) v[static_cast<std::size_t>(first) + i] = part[i];
  return RealSignal(full, std::move(v));
}

/// Picks the reconstruction variant from the configuration:
/// threshold (optionally intersected with the region) -> icwt_masked,
/// region alone -> icwt_region, neither -> icwt_full.
inline RealSignal invert(const Scalogram& sg, const RunConfig& cfg) {
  if (cfg.threshold) {
    detail::require(std::isfinite(*cfg.threshold) && *cfg.threshold >= 0.0 && *cfg.threshold <= 1.0,
                    ErrorCode::config_threshold, "--threshold must lie in [0, 1]");
    ScalogramMask mask = threshold_mask(sg, *cfg.threshold);
    if (cfg.region) mask = mask & rectangle_mask(sg, *cfg.region);
    return icwt_masked(sg, mask);
  }
  if (cfg.region) return icwt_region(sg, *cfg.region);
  return icwt_full(sg);
}

inline std::string format_ridge_csv(const std::vector<RidgePoint>& ridge) {
  std::string out = "b,a_max,freq\n";
  for (const auto& p : ridge) {
    out += io::detail::format_double(p.shift);
    switch (p.status) {
      case RidgeStatus::ok:
        out += ',' + io::detail::format_double(p.scale) + ',' + io::detail::format_double(p.frequency);
        break;
      case RidgeStatus::undefined_frequency:
        out += ',' + io::detail::format_double(p.scale) + ",undefined";
        break;
      case RidgeStatus::no_ridge:
        out += ",no_ridge,no_ridge";
        break;
    }
    out += '\n';
  }
  return out;
}

}  // namespace morlet
