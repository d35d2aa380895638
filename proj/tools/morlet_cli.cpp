// morlet: command-line front end for the Morlet transform library.
//
//   morlet synth {test7|harmonic|fourier} -o signal.csv
//   morlet transform signal.csv --prefix out/sg
//   morlet invert out/sg -o recon.csv [--threshold L] [--b-lo .. --b-hi .. --a-lo .. --a-hi ..]
//   morlet ridge out/sg -o ridge.csv
//
// Exit status: 0 success, 2 invalid input or configuration, 3 NaN/Inf
// produced during computation.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "morlet/cwt.hpp"
#include "morlet/error.hpp"
#include "morlet/icwt.hpp"
#include "morlet/io.hpp"
#include "morlet/pipeline.hpp"
#include "morlet/signal.hpp"
#include "morlet/testgen.hpp"

namespace {

using namespace morlet;

struct SynthOptions {
  std::string name;
  std::string out;
  std::size_t n = 512;
  double freq = 10.0;
  double duration = 1.0;
  double amplitude = 1.0;
  double taper_samples = 0.0;
  bool taper = false;
  std::string spec_path;
};

struct RegionFlags {
  std::optional<double> b_lo, b_hi, a_lo, a_hi;

  std::optional<Region> region() const {
    const int given = b_lo.has_value() + b_hi.has_value() + a_lo.has_value() + a_hi.has_value();
    if (given == 0) return std::nullopt;
    detail::require(given == 4, ErrorCode::config_region,
                    "--b-lo, --b-hi, --a-lo and --a-hi must be given together");
    try {
      return Region(*b_lo, *b_hi, *a_lo, *a_hi);
    } catch (const Error& e) {
      throw Error(ErrorCode::config_region, e.what());
    }
  }
};

testgen::FourierSeriesSpec read_fourier_spec(const std::string& path) {
  const std::string text = io::detail::read_file(path);
  // An empty file is an empty series.
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    return testgen::FourierSeriesSpec(1.0, {});
  try {
    const auto j = nlohmann::json::parse(text);
    std::vector<testgen::FourierTerm> terms;
    for (const auto& t : j.value("terms", nlohmann::json::array()))
      terms.push_back({t.at("n").get<int>(), t.value("A", 0.0), t.value("B", 0.0)});
    return testgen::FourierSeriesSpec(j.value("period", 1.0), std::move(terms));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_fourier_spec, "fourier spec: " + std::string(e.what()));
  }
}

void run_synth(const SynthOptions& o) {
  detail::require(o.n >= 2, ErrorCode::too_short, "--n must be >= 2");
  RealSignal s = [&] {
    if (o.name == "test7") {
      const TimeGrid grid(0.0, 1.0 / static_cast<double>(o.n - 1), o.n);
      testgen::TestSignalOptions opts;
      if (o.taper) opts.taper_samples = o.taper_samples > 0.0 ? o.taper_samples : 1.0;
      return testgen::synth_test_signal(grid, opts);
    }
    if (o.name == "harmonic") {
      detail::require(o.duration > 0.0, ErrorCode::invalid_grid, "--duration must be positive");
      const TimeGrid grid(0.0, o.duration / static_cast<double>(o.n - 1), o.n);
      std::vector<double> v(o.n);
      for (std::size_t i = 0; i < o.n; ++i)
        v[i] = o.amplitude * std::cos(2.0 * std::numbers::pi * o.freq *
                                      grid.time(static_cast<std::ptrdiff_t>(i)));
      return RealSignal(grid, std::move(v));
    }
    if (o.name == "fourier") {
      detail::require(!o.spec_path.empty(), ErrorCode::invalid_fourier_spec,
                      "synth fourier needs --spec");
      const auto spec = read_fourier_spec(o.spec_path);
      // Periodic grid: n samples per period, endpoint excluded.
      const TimeGrid grid(0.0, spec.period() / static_cast<double>(o.n), o.n);
      return testgen::synth_fourier(spec, grid);
    }
    throw Error(ErrorCode::unknown_generator,
                "unknown generator '" + o.name + "' (expected test7, harmonic or fourier)");
  }();
  io::write_signal_csv(o.out, s);
}

void run_transform(const std::string& in, const std::string& prefix, const RunConfig& cfg) {
  const RealSignal input = io::read_signal_csv(in);
  io::ScalogramMeta meta;
  meta.boundary_mode = cfg.boundary_mode;
  meta.frequency_norm = cfg.frequency_norm();
  meta.input = in;
  const Scalogram sg = transform(input, cfg, &meta.pipeline);
  io::write_scalogram(prefix, sg, meta);
}

void run_invert(const std::string& prefix, const std::string& out, const RunConfig& cfg,
                bool zero_pad) {
  const auto file = io::read_scalogram(prefix);
  RealSignal r = invert(file.scalogram, cfg);
  if (zero_pad && r.size() != file.scalogram.grid().size())
    r = zero_pad_to(r, file.scalogram.grid());
  io::write_signal_csv(out, r);
}

void run_ridge(const std::string& prefix, const std::string& out) {
  const auto file = io::read_scalogram(prefix);
  io::detail::write_file(out, format_ridge_csv(ridge_extract(file.scalogram)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Morlet continuous wavelet transform and its exact inverse"};
  app.require_subcommand(1);

  SynthOptions synth;
  auto* cmd_synth = app.add_subcommand("synth", "Write a synthetic signal as t,value CSV");
  cmd_synth->add_option("name", synth.name, "Generator: test7 | harmonic | fourier")->required();
  cmd_synth->add_option("-o,--out", synth.out, "Output CSV")->required();
  cmd_synth->add_option("--n", synth.n, "Number of samples")->capture_default_str();
  cmd_synth->add_option("--freq", synth.freq, "harmonic: frequency in cycles per unit time")
      ->capture_default_str();
  cmd_synth->add_option("--duration", synth.duration, "harmonic: signal length")->capture_default_str();
  cmd_synth->add_option("--amplitude", synth.amplitude, "harmonic: amplitude")->capture_default_str();
  cmd_synth->add_flag("--taper", synth.taper, "test7: linear edge ramps instead of a sharp gate");
  cmd_synth->add_option("--taper-samples", synth.taper_samples, "test7: ramp width in samples (default 1)");
  cmd_synth->add_option("--spec", synth.spec_path, "fourier: JSON {period, terms:[{n,A,B}]}");

  RunConfig cfg;
  std::string boundary = "reflect";
  std::optional<double> threshold;
  RegionFlags region;
  std::string in_csv, prefix, out;
  bool zero_pad = false;

  auto* cmd_transform = app.add_subcommand("transform", "Forward CWT of a t,value CSV");
  cmd_transform->add_option("input", in_csv, "Input signal CSV")->required();
  cmd_transform->add_option("--prefix", prefix, "Output prefix for .meta.json/.w.csv/.abs.csv")
      ->required();
  cmd_transform->add_option("--omega0", cfg.omega0, "Central frequency")->capture_default_str();
  cmd_transform->add_option("--a-min", cfg.scale_min, "Smallest scale")->capture_default_str();
  cmd_transform->add_option("--a-max", cfg.scale_max, "Largest scale")->capture_default_str();
  cmd_transform->add_option("--a-count", cfg.scale_count, "Number of scales")->capture_default_str();
  cmd_transform->add_option("--boundary", boundary, "reflect | periodic")->capture_default_str();
  cmd_transform->add_flag("--compat-freq-norm", cfg.compat_freq_norm,
                          "Bin spacing 2pi/(t_end - t_start) instead of 2pi/(N dt)");

  auto* cmd_invert = app.add_subcommand("invert", "Reconstruct a signal from a scalogram");
  cmd_invert->add_option("prefix", prefix, "Scalogram prefix")->required();
  cmd_invert->add_option("-o,--out", out, "Output CSV")->required();
  cmd_invert->add_option("--threshold", threshold, "Mask level L in [0, 1]");
  cmd_invert->add_option("--b-lo", region.b_lo, "Region: first shift");
  cmd_invert->add_option("--b-hi", region.b_hi, "Region: last shift");
  cmd_invert->add_option("--a-lo", region.a_lo, "Region: smallest scale");
  cmd_invert->add_option("--a-hi", region.a_hi, "Region: largest scale");
  cmd_invert->add_flag("--zero-pad", zero_pad, "Region output padded with zeros to the full grid");

  auto* cmd_ridge = app.add_subcommand("ridge", "Per-shift modulus maximum over scales");
  cmd_ridge->add_option("prefix", prefix, "Scalogram prefix")->required();
  cmd_ridge->add_option("-o,--out", out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cmd_synth->parsed()) {
      run_synth(synth);
    } else if (cmd_transform->parsed()) {
      detail::require(boundary == "reflect" || boundary == "periodic", ErrorCode::config_boundary,
                      "--boundary must be reflect or periodic");
      cfg.boundary_mode = boundary == "reflect" ? io::BoundaryMode::reflect : io::BoundaryMode::periodic;
      run_transform(in_csv, prefix, cfg);
    } else if (cmd_invert->parsed()) {
      cfg.threshold = threshold;
      cfg.region = region.region();
      if (threshold)
        detail::require(*threshold >= 0.0 && *threshold <= 1.0, ErrorCode::config_threshold,
                        "--threshold must lie in [0, 1]");
      run_invert(prefix, out, cfg, zero_pad);
    } else if (cmd_ridge->parsed()) {
      run_ridge(prefix, out);
    }
  } catch (const Error& e) {
    std::cerr << "error[" << static_cast<int>(e.code()) << " " << to_string(e.code())
              << "]: " << e.what() << '\n';
    return exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
