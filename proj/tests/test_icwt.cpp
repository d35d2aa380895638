#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "morlet/cwt.hpp"
#include "morlet/icwt.hpp"
#include "morlet/testgen.hpp"
#include "support/invariants.hpp"

using namespace morlet;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

/// Closed-form scalogram of the analytic harmonic exp(i omega t).
Scalogram harmonic_scalogram(const ScaleGrid& a, const TimeGrid& g, double omega,
                             double omega0 = 2.0 * pi) {
  ComplexMatrix w(a.size(), g.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t j = 0; j < g.size(); ++j)
      w(k, j) = std::polar(harmonic_response(a[k], omega, omega0), omega * g.time(j));
  return Scalogram(a, g, std::move(w), MorletParams(omega0));
}

Scalogram random_scalogram(std::uint64_t seed, std::size_t rows, std::size_t cols) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  ComplexMatrix w(rows, cols);
  for (auto& v : w.data()) v = cdouble(d(rng), d(rng));
  return Scalogram(ScaleGrid::linspace(0.0, 0.2, rows), TimeGrid(0.0, 0.01, cols), std::move(w),
                   MorletParams{});
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected morlet::Error");
  return ErrorCode::numerical_failure;
}

}  // namespace

TEST_CASE("d_db", "[icwt]") {
  const auto a = ScaleGrid::linspace(0.0, 0.2, 3);

  SECTION("constant rows differentiate to zero") {
    const Scalogram sg(a, TimeGrid(0.0, 0.1, 6), ComplexMatrix(3, 6, cdouble(2.0, -1.0)), MorletParams{});
    const auto dw = d_db(sg);
    for (const auto& v : dw.data()) CHECK(v == cdouble{});
  }
  SECTION("w = b gives ones everywhere, boundaries included") {
    const TimeGrid g(0.5, 0.25, 5);
    ComplexMatrix w(3, 5);
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t j = 0; j < 5; ++j) w(k, j) = g.time(j);
    const auto dw = d_db(Scalogram(a, g, w, MorletParams{}));
    for (const auto& v : dw.data()) CHECK(v == cdouble(1.0, 0.0));
  }
  SECTION("pure exponential picks up the central-difference sinc factor") {
    const double omega = 2.0 * pi * 9.0;
    const TimeGrid g(0.0, 1.0 / 128.0, 128);
    const auto sg = harmonic_scalogram(a, g, omega);
    const auto dw = d_db(sg);
    const double x = omega * g.dt();
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t j = 1; j + 1 < g.size(); ++j) {
        const cdouble expected = cdouble(0.0, omega) * (std::sin(x) / x) * sg(k, j);
        CHECK(std::abs(dw(k, j) - expected) <= 1e-10 * omega);
      }
  }
  SECTION("fewer than 3 shifts is rejected") {
    const Scalogram sg(a, TimeGrid(0.0, 1.0, 2), ComplexMatrix(3, 2), MorletParams{});
    CHECK(code_of([&] { (void)d_db(sg); }) == ErrorCode::too_short);
  }
}

TEST_CASE("icwt_full", "[icwt]") {
  SECTION("zero scalogram gives zero") {
    const Scalogram sg(ScaleGrid::linspace(0, 0.2, 11), TimeGrid(0.0, 0.01, 32), ComplexMatrix(11, 32),
                       MorletParams{});
    const auto rec = icwt_full(sg);
    for (double v : rec.values()) CHECK(v == 0.0);
  }
  SECTION("single harmonic with well-covered scales recovers the cosine") {
    const double omega = 2.0 * pi * 5.0;
    const TimeGrid g(0.0, 1.0 / 2048.0, 2048);
    const auto a = ScaleGrid::linspace(0.0, 0.2 + 8.0 / omega, 400);
    const auto rec = icwt_full(harmonic_scalogram(a, g, omega));
    std::vector<double> expected(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) expected[j] = std::cos(omega * g.time(j));
    CHECK(check::rel_l2(rec.values(), expected, 1, g.size() - 1) <= 1e-3);
  }
  SECTION("non-uniform scale grids use per-interval trapezoid weights") {
    // Two intervals of widths 0.1 and 0.3; w linear in b with slope s_k.
    const ScaleGrid a({0.0, 0.1, 0.4});
    const TimeGrid g(0.0, 1.0, 4);
    ComplexMatrix w(3, 4);
    const double slope[] = {1.0, 2.0, 4.0};
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t j = 0; j < 4; ++j) w(k, j) = cdouble(0.0, slope[k] * g.time(j));
    const auto rec = icwt_full(Scalogram(a, g, w, MorletParams{}));
    const double integral = 0.05 * (1.0 + 2.0) + 0.15 * (2.0 + 4.0);
    for (double v : rec.values()) CHECK_THAT(v, WithinRel(integral / std::sqrt(2.0 * pi), 1e-14));
  }
  SECTION("a two-scale grid is accepted") {
    const auto sg = random_scalogram(3, 2, 8);
    CHECK(icwt_full(sg).size() == 8);
  }
}

TEST_CASE("icwt_region", "[icwt]") {
  const auto sg = random_scalogram(5, 21, 101);  // b in [0, 1], a in [0, 0.2]

  SECTION("the full extent reproduces icwt_full") {
    const auto full = icwt_full(sg);
    const auto part = icwt_region(sg, Region(0.0, 1.0, 0.0, 0.2));
    CHECK(part.grid() == full.grid());
    for (std::size_t j = 0; j < full.size(); ++j) CHECK(part[j] == full[j]);
  }
  SECTION("a shift window matches icwt_full away from its two edges") {
    const auto full = icwt_full(sg);
    const auto part = icwt_region(sg, Region(0.3, 0.7, 0.0, 0.2));
    REQUIRE(part.size() == 41);
    CHECK_THAT(part.grid().start(), WithinAbs(0.3, 1e-12));
    for (std::size_t j = 1; j + 1 < part.size(); ++j) CHECK(part[j] == full[30 + j]);

    // At the edges the stencil degrades; the change is exactly the
    // second difference over 2 dt, so bound it by its modulus.
    for (auto [local, global] : {std::pair<std::size_t, std::size_t>{0, 30}, {40, 70}}) {
      double bound = 0.0;
      for (std::size_t k = 0; k + 1 < sg.scales().size(); ++k) {
        auto d2 = [&](std::size_t r) {
          return std::abs(sg(r, global + 1) - 2.0 * sg(r, global) + sg(r, global - 1)) / (2.0 * 0.01);
        };
        bound += 0.5 * (sg.scales()[k + 1] - sg.scales()[k]) * (d2(k) + d2(k + 1));
      }
      bound /= std::sqrt(2.0 * pi);
      CHECK(std::abs(part[local] - full[global]) <= bound * (1.0 + 1e-12));
    }
  }
  SECTION("bounds snap outward to grid points") {
    const auto idx = locate(sg, Region(0.305, 0.695, 0.031, 0.049));
    CHECK(idx.col_begin == 30);
    CHECK(idx.col_end == 71);
    CHECK(idx.row_begin == 3);  // a = 0.03
    CHECK(idx.row_end == 6);    // through a = 0.05
  }
  SECTION("a region that coincides with grid points is not widened") {
    const auto idx = locate(sg, Region(0.3, 0.7, 0.03, 0.05));
    CHECK(idx.col_begin == 30);
    CHECK(idx.col_end == 71);
    CHECK(idx.row_begin == 3);
    CHECK(idx.row_end == 6);
  }
  SECTION("empty or degenerate selections are rejected") {
    CHECK(code_of([&] { (void)icwt_region(sg, Region(1.5, 2.0, 0.0, 0.2)); }) == ErrorCode::empty_selection);
    CHECK(code_of([&] { (void)icwt_region(sg, Region(0.0, 1.0, 0.5, 0.7)); }) == ErrorCode::empty_selection);
    CHECK(code_of([&] { (void)icwt_region(sg, Region(0.3, 0.305, 0.0, 0.2)); }) == ErrorCode::empty_selection);
    CHECK(code_of([] { (void)Region(0.5, 0.5, 0.0, 0.2); }) == ErrorCode::invalid_region);
    CHECK(code_of([] { (void)Region(0.0, 1.0, 0.2, 0.1); }) == ErrorCode::invalid_region);
    CHECK(code_of([] { (void)Region(0.0, 1.0, -0.1, 0.1); }) == ErrorCode::invalid_region);
  }
}

TEST_CASE("threshold_mask", "[icwt]") {
  const auto sg = random_scalogram(7, 11, 40);

  SECTION("L = 0 selects every nonzero entry") { CHECK(threshold_mask(sg, 0.0).count() == 11 * 40); }
  SECTION("L = 1 excludes even the maximum") { CHECK(threshold_mask(sg, 1.0).count() == 0); }
  SECTION("the global maximum sets the level") {
    double peak = 0.0;
    for (const auto& v : sg.w().data()) peak = std::max(peak, std::abs(v));
    const auto m = threshold_mask(sg, 0.5);
    for (std::size_t k = 0; k < 11; ++k)
      for (std::size_t j = 0; j < 40; ++j) CHECK(m(k, j) == (std::abs(sg(k, j)) > 0.5 * peak));
  }
  SECTION("harmonic: level exp(-1/2) keeps |a omega - omega0| < 1") {
    const double omega = 2.0 * pi * 10.0;
    // 0.1 is on the grid, so the peak is exactly 1.
    const auto a = ScaleGrid::linspace(0.0, 0.2, 81);
    const auto hs = harmonic_scalogram(a, TimeGrid(0.0, 1.0 / 64.0, 64), omega);
    const auto m = threshold_mask(hs, std::exp(-0.5) * (1.0 + 1e-9));
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double u = std::abs(a[k] * omega - 2.0 * pi);
      if (std::abs(u - 1.0) < 1e-6) continue;
      for (std::size_t j = 0; j < 64; ++j) CHECK(m(k, j) == (u < 1.0));
    }
  }
  SECTION("levels outside [0, 1] are rejected") {
    CHECK(code_of([&] { (void)threshold_mask(sg, -0.1); }) == ErrorCode::invalid_threshold);
    CHECK(code_of([&] { (void)threshold_mask(sg, 1.5); }) == ErrorCode::invalid_threshold);
  }
}

TEST_CASE("icwt_masked", "[icwt]") {
  const auto sg = random_scalogram(9, 15, 64);
  const auto full = icwt_full(sg);

  SECTION("all-ones mask equals icwt_full bit for bit") {
    const auto out = icwt_masked(sg, ScalogramMask::filled(15, 64, true));
    for (std::size_t j = 0; j < 64; ++j) CHECK(out[j] == full[j]);
  }
  SECTION("threshold 0 on a scalogram without zeros equals icwt_full bit for bit") {
    const auto out = icwt_masked(sg, threshold_mask(sg, 0.0));
    for (std::size_t j = 0; j < 64; ++j) CHECK(out[j] == full[j]);
  }
  SECTION("all-zeros mask gives zero") {
    const auto rec = icwt_masked(sg, ScalogramMask::filled(15, 64, false));
    for (double v : rec.values()) CHECK(v == 0.0);
  }
  SECTION("mask multiplies the derivative, not the scalogram") {
    // Masking a single column must leave the derivative of its neighbours
    // untouched: only that column receives a contribution.
    Matrix<std::uint8_t> m(15, 64, 0);
    for (std::size_t k = 0; k < 15; ++k) m(k, 20) = 1;
    const auto out = icwt_masked(sg, ScalogramMask(m));
    for (std::size_t j = 0; j < 64; ++j) {
      if (j == 20) {
        CHECK(out[j] == full[j]);
      } else {
        CHECK(out[j] == 0.0);
      }
    }
  }
  SECTION("mask partition identity") {
    const auto r = check::mask_partition(sg);
    INFO("worst " << r.worst);
    CHECK(r.pass);
  }
  SECTION("mismatched or non-binary masks are rejected") {
    CHECK(code_of([&] { (void)icwt_masked(sg, ScalogramMask::filled(15, 63, true)); }) ==
          ErrorCode::dimension_mismatch);
    CHECK(code_of([] { (void)ScalogramMask(Matrix<std::uint8_t>(2, 2, 2)); }) == ErrorCode::invalid_mask);
  }
}

TEST_CASE("rectangle masks intersect with threshold masks", "[icwt]") {
  const auto sg = random_scalogram(13, 21, 101);
  const Region r(0.2, 0.4, 0.05, 0.1);
  const auto rect = rectangle_mask(sg, r);
  const auto idx = locate(sg, r);
  CHECK(rect.count() == (idx.row_end - idx.row_begin) * (idx.col_end - idx.col_begin));
  const auto both = threshold_mask(sg, 0.3) & rect;
  CHECK(both.count() <= rect.count());
  for (std::size_t k = 0; k < 21; ++k)
    for (std::size_t j = 0; j < 101; ++j) CHECK(both(k, j) == (rect(k, j) && threshold_mask(sg, 0.3)(k, j)));
}

TEST_CASE("reconstruction invariants", "[icwt][property]") {
  SECTION("affine derivative exactness") {
    const auto r = check::affine_derivative_exactness();
    INFO("worst " << r.worst);
    CHECK(r.pass);
  }
  SECTION("3-sigma scale truncation changes a harmonic by at most 0.3 %") {
    const auto r = check::scale_truncation_bound();
    INFO("worst " << r.worst);
    CHECK(r.pass);
  }
}
