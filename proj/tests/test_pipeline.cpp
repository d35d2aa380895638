#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "morlet/pipeline.hpp"
#include "morlet/testgen.hpp"
#include "support/invariants.hpp"

using namespace morlet;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected morlet::Error");
  return ErrorCode::numerical_failure;
}

RealSignal test7(std::size_t n = 512) { return testgen::synth_test_signal(TimeGrid(0.0, 1.0 / (n - 1.0), n)); }

}  // namespace

TEST_CASE("RunConfig validation", "[pipeline]") {
  const auto s = test7(64);
  auto bad = [&](auto mutate) {
    RunConfig c;
    mutate(c);
    return code_of([&] { (void)transform(s, c); });
  };
  CHECK(bad([](RunConfig& c) { c.omega0 = 0.0; }) == ErrorCode::config_omega0);
  CHECK(bad([](RunConfig& c) { c.omega0 = NAN; }) == ErrorCode::config_omega0);
  CHECK(bad([](RunConfig& c) { c.scale_min = 0.3; }) == ErrorCode::config_scale_range);
  CHECK(bad([](RunConfig& c) { c.scale_min = -0.1; }) == ErrorCode::config_scale_range);
  CHECK(bad([](RunConfig& c) { c.scale_count = 1; }) == ErrorCode::config_scale_count);
  CHECK(bad([](RunConfig& c) { c.threshold = 1.5; }) == ErrorCode::config_threshold);
  CHECK(code_of([] { (void)transform(RealSignal(TimeGrid(0, 1, 3), {1, 2, 3}), RunConfig{}); }) ==
        ErrorCode::too_short);
}

TEST_CASE("transform in reflect mode", "[pipeline]") {
  std::vector<std::string> steps;
  const auto sg = transform(test7(), RunConfig{}, &steps);
  CHECK(sg.scales().size() == 51);
  CHECK(sg.grid().size() == 512);
  CHECK(sg.grid().start() == 0.0);
  CHECK(steps == std::vector<std::string>{"remove_mean", "resample_pow2", "reflect_extend", "analytic_signal",
                                          "cwt_forward", "crop_center"});

  SECTION("ridge follows the two components") {
    const auto ridge = ridge_extract(sg);
    for (const auto& p : ridge) {
      if (p.shift > 0.02 && p.shift < 0.15) CHECK(std::abs(p.scale - 0.1) <= 0.004 + 1e-12);
      if (p.shift > 0.35 && p.shift < 0.63) CHECK(std::abs(p.scale - 0.05) <= 0.002 + 1e-12);
    }
  }
  SECTION("inversion yields a real signal on the input grid") {
    const auto rec = invert(sg, RunConfig{});
    CHECK(rec.grid() == sg.grid());
    CHECK(check::max_abs(rec.values()) < 2.0);
  }
  SECTION("a repeated run is bit-identical") {
    CHECK(transform(test7(), RunConfig{}).w() == sg.w());
  }
}

TEST_CASE("transform in periodic mode skips the reflection", "[pipeline]") {
  RunConfig c;
  c.boundary_mode = io::BoundaryMode::periodic;
  std::vector<std::string> steps;
  const auto sg = transform(test7(), c, &steps);
  CHECK(sg.grid().size() == 512);
  CHECK(std::find(steps.begin(), steps.end(), "reflect_extend") == steps.end());

  // A periodic harmonic is reproduced by the closed form without edge effects.
  const std::size_t n = 256;
  const TimeGrid g(0.0, 1.0 / n, n);
  const testgen::FourierSeriesSpec spec(1.0, {{8, 1.0, 0.0}});
  const auto w = transform(testgen::synth_fourier(spec, g), c);
  const auto oracle = testgen::oracle_cwt_series(spec, c.scales(), g);
  CHECK(check::rel_max_diff<cdouble>(w.w().data(), oracle.w().data()) <= 1e-10);
}

TEST_CASE("non power-of-two inputs are resampled", "[pipeline]") {
  const auto sg = transform(test7(500), RunConfig{});
  CHECK(sg.grid().size() == 512);
  CHECK(sg.grid().start() == 0.0);
  CHECK(std::abs(sg.grid().end() - 1.0) <= 1e-12);
}

TEST_CASE("invert chooses the variant from the configuration", "[pipeline]") {
  const auto sg = transform(test7(), RunConfig{});
  const auto full = icwt_full(sg);

  RunConfig zero;
  zero.threshold = 0.0;
  CHECK(std::ranges::equal(invert(sg, zero).values(), full.values()));

  RunConfig reg;
  reg.region = Region(0.3, 0.7, 0.02, 0.06);
  const auto part = invert(sg, reg);
  const auto direct = icwt_region(sg, *reg.region);
  CHECK(std::ranges::equal(part.values(), direct.values()));

  RunConfig both = reg;
  both.threshold = 0.2;
  const auto mask = threshold_mask(sg, 0.2) & rectangle_mask(sg, *reg.region);
  CHECK(std::ranges::equal(invert(sg, both).values(), icwt_masked(sg, mask).values()));

  SECTION("zero padding places the window on the full grid") {
    const auto padded = zero_pad_to(part, sg.grid());
    const auto idx = locate(sg, *reg.region);
    for (std::size_t j = 0; j < padded.size(); ++j) {
      if (j < idx.col_begin || j >= idx.col_end)
        CHECK(padded[j] == 0.0);
      else
        CHECK(padded[j] == part[j - idx.col_begin]);
    }
    CHECK(code_of([&] { (void)zero_pad_to(full, TimeGrid(0.0, sg.grid().dt(), 10)); }) ==
          ErrorCode::dimension_mismatch);
  }
}

TEST_CASE("ridge CSV formatting", "[pipeline]") {
  const std::vector<RidgePoint> pts{
      {0.5, RidgeStatus::ok, 2, 0.1, 10.0},
      {0.25, RidgeStatus::undefined_frequency, 0, 0.0, INFINITY},
      {1.0, RidgeStatus::no_ridge, 0, 0.0, 0.0},
  };
  CHECK(format_ridge_csv(pts) == "b,a_max,freq\n0.5,0.10000000000000001,10\n0.25,0,undefined\n1,no_ridge,no_ridge\n");
}
