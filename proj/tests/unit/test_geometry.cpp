#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "radarloc/errors.hpp"
#include "radarloc/geometry.hpp"

using namespace radarloc;

namespace {

constexpr double kPi = std::numbers::pi;

SisoPairConfig room_pair(double delta_r = 0.15) { return {1.5, 2.5, 2.0 * kPi / 3.0, delta_r}; }

MimoArrayConfig room_array() {
  MimoArrayConfig m;
  m.position = {2.0, 0.0};
  m.n_channels = 8;
  m.wavelength = kSpeedOfLight / 60e9;
  m.element_spacing = m.wavelength / 2.0;
  return m;
}

// Frozen from a 40-digit evaluation of the law-of-cosines fix at the
// perturbed ranges (r1 = r2 = sqrt(4.25), a = 1.5, b = 2.5).
constexpr double kSpreadDr015 = 0.30960264388357772;
constexpr double kMarginDr015 = 0.30468019680139228;
constexpr double kTheta1Dr015 = 1.7255976487366855;
constexpr double kSpreadDr0075 = 0.15457336064956645;
constexpr double kSpreadBin1GHz = 0.30938744232991625;  // delta_r = c / 2 GHz

}  // namespace

TEST_CASE("true_ranges forward model") {
  const auto pair = room_pair();
  auto r = true_ranges({2.0, 2.0}, pair);
  CHECK(r.r1 == doctest::Approx(std::sqrt(4.25)).epsilon(1e-15));
  CHECK(r.r2 == doctest::Approx(std::sqrt(4.25)).epsilon(1e-15));

  r = true_ranges({1.0, 1.0}, pair);
  CHECK(r.r1 == doctest::Approx(1.1180340).epsilon(1e-7));
  CHECK(r.r2 == doctest::Approx(1.8027756).epsilon(1e-7));

  const double eps = 1e-7;
  r = true_ranges({pair.a, eps}, pair);
  CHECK(r.r1 == doctest::Approx(eps).epsilon(1e-12));
  CHECK(r.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("triangulate inverts true_ranges") {
  const auto pair = room_pair();
  auto p = triangulate({std::sqrt(4.25), std::sqrt(4.25)}, pair);
  CHECK(p.x == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(2.0).epsilon(1e-12));

  p = triangulate({std::sqrt(1.25), std::sqrt(3.25)}, pair);
  CHECK(std::abs(p.x - 1.0) < 1e-12);
  CHECK(std::abs(p.y - 1.0) < 1e-12);
}

TEST_CASE("triangulate error paths") {
  CHECK_THROWS_AS(triangulate({0.4, 0.4}, room_pair()), InfeasibleGeometry);
  CHECK_THROWS_AS(triangulate({1.0, 3.0}, room_pair()), InfeasibleGeometry);  // |r1 - r2| > d
  SisoPairConfig same = room_pair();
  same.b = same.a;
  CHECK_THROWS_AS(triangulate({1.0, 1.0}, same), DegenerateBaseline);
  CHECK_THROWS_AS(triangulate({-1.0, 1.0}, room_pair()), ValidationError);
}

TEST_CASE("triangulate clamps near-tangent circles to the baseline") {
  const auto pair = room_pair();
  // r1 + r2 = d up to a relative 1e-12: inside the slack.
  const auto p = triangulate({0.5 * (1.0 - 1e-12), 0.5}, pair);
  CHECK(p.y == 0.0);
  CHECK(p.x == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("triangulate handles reversed node order with signed x") {
  // Node 1 to the right of node 2; the absolute-value form would mirror x.
  const SisoPairConfig pair{2.5, 1.5, 2.0 * kPi / 3.0, 0.15};
  for (const Point2D t : {Point2D{0.3, 1.0}, Point2D{-0.7, 2.0}, Point2D{3.9, 0.4}}) {
    const auto p = triangulate(true_ranges(t, pair), pair);
    CHECK(std::abs(p.x - t.x) < 1e-9);
    CHECK(std::abs(p.y - t.y) < 1e-9);
  }
}

TEST_CASE("round-trip and circle consistency over the room grid") {
  const auto pair = room_pair();
  double worst = 0.0;
  double worst_residual = 0.0;
  for (int i = 0; i <= 80; ++i) {
    for (int j = 0; j <= 76; ++j) {
      const Point2D t{0.05 * i, 0.2 + 0.05 * j};
      const auto r = true_ranges(t, pair);
      const auto p = triangulate(r, pair);
      worst = std::max({worst, std::abs(p.x - t.x), std::abs(p.y - t.y)});
      const double res1 = (p.x - pair.a) * (p.x - pair.a) + p.y * p.y - r.r1 * r.r1;
      const double res2 = (p.x - pair.b) * (p.x - pair.b) + p.y * p.y - r.r2 * r.r2;
      worst_residual = std::max({worst_residual, std::abs(res1), std::abs(res2)});
    }
  }
  CHECK(worst < 1e-9);
  CHECK(worst_residual < 1e-9);
}

TEST_CASE("equivalent_polar examples") {
  const auto pair = room_pair();
  auto fix = equivalent_polar({std::sqrt(4.25), std::sqrt(4.25)}, pair);
  CHECK(fix.r_eq == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(fix.theta == doctest::Approx(kPi / 2).epsilon(1e-14));

  // Oracle: distance and azimuth of (1, 1) from (2, 0).
  fix = equivalent_polar({std::sqrt(1.25), std::sqrt(3.25)}, pair);
  CHECK(fix.r_eq == doctest::Approx(std::hypot(-1.0, 1.0)).epsilon(1e-12));
  CHECK(fix.theta == doctest::Approx(std::atan2(1.0, -1.0)).epsilon(1e-12));
  CHECK(fix.theta == doctest::Approx(3.0 * kPi / 4.0).epsilon(1e-12));

  CHECK_THROWS_AS(equivalent_polar({0.4, 0.4}, pair), InfeasibleGeometry);
}

TEST_CASE("median identity against the law-of-cosines oracle") {
  const auto pair = room_pair();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-1.0, 5.0), uy(0.05, 5.0);
  for (int k = 0; k < 2000; ++k) {
    const Point2D t{ux(rng), uy(rng)};
    const auto r = true_ranges(t, pair);
    const auto fix = equivalent_polar(r, pair);
    const auto ref = oracle::law_of_cosines_fix(r.r1, r.r2, pair.a, pair.b);
    CHECK(std::abs(fix.r_eq - std::hypot(ref.x - pair.midpoint(), ref.y)) < 1e-9);
    CHECK(std::abs(fix.theta - oracle::azimuth_from(ref, pair.midpoint())) < 1e-9);
  }
}

TEST_CASE("equivalent angular resolution at the room centre") {
  const RangePair mid{std::sqrt(4.25), std::sqrt(4.25)};
  const double spread = equivalent_angular_resolution(mid, room_pair(0.15));
  CHECK(spread == doctest::Approx(kSpreadDr015).epsilon(1e-12));
  CHECK(equivalent_polar({mid.r1, mid.r2 + 0.15}, room_pair()).theta ==
        doctest::Approx(kTheta1Dr015).epsilon(1e-12));

  // Midline targets: mirrored perturbations, so the spread is 2 (theta1 - pi/2).
  CHECK(spread == doctest::Approx(2.0 * (kTheta1Dr015 - kPi / 2)).epsilon(1e-12));

  const double half = equivalent_angular_resolution(mid, room_pair(0.075));
  CHECK(half == doctest::Approx(kSpreadDr0075).epsilon(1e-12));
  CHECK(half / spread == doctest::Approx(0.5).epsilon(0.05));

  CHECK(equivalent_angular_resolution(mid, room_pair(kSpeedOfLight / 2e9)) ==
        doctest::Approx(kSpreadBin1GHz).epsilon(1e-12));
}

TEST_CASE("equivalent angular resolution matches the cosine-law finite difference") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(0.0, 4.0), uy(0.3, 4.0), udr(0.001, 0.2);
  for (int k = 0; k < 1000; ++k) {
    const Point2D t{ux(rng), uy(rng)};
    const auto pair = room_pair(udr(rng));
    const auto r = true_ranges(t, pair);
    const auto spread = detail::try_equivalent_angular_resolution(r, pair);
    if (!spread) continue;
    CHECK(*spread ==
          doctest::Approx(oracle::spread_by_cosines(r.r1, r.r2, pair.a, pair.b, pair.delta_r))
              .epsilon(1e-8));
  }
}

TEST_CASE("infeasible perturbation is reported") {
  // On the baseline extension |r1 - r2| = d; adding delta_r to r2 breaks it.
  const auto pair = room_pair();
  CHECK_THROWS_AS(equivalent_angular_resolution({0.5, 1.5}, pair), InfeasibleGeometry);
  CHECK_THROWS_AS(multisite_error_margin({0.5, 1.5}, pair), InfeasibleGeometry);
}

TEST_CASE("multisite error margin") {
  const RangePair mid{std::sqrt(4.25), std::sqrt(4.25)};
  CHECK(multisite_error_margin(mid, room_pair(0.15)) ==
        doctest::Approx(kMarginDr015).epsilon(1e-12));
  CHECK(multisite_error_margin(mid, room_pair(1e-9)) < 1e-8);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(0.5, 3.5), uy(0.5, 4.0);
  for (int k = 0; k < 500; ++k) {
    const auto r = true_ranges({ux(rng), uy(rng)}, room_pair());
    // near the baseline the larger step can leave the feasible region
    const auto wide = detail::try_equivalent_angular_resolution(r, room_pair(0.15));
    if (!wide) continue;
    CHECK(multisite_error_margin(r, room_pair(0.075)) < multisite_error_margin(r, room_pair(0.15)));
  }
}

TEST_CASE("mirror symmetry of the pair metrics") {
  const auto pair = room_pair();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ux(0.0, 4.0), uy(0.2, 4.0);
  for (int k = 0; k < 1000; ++k) {
    const Point2D t{ux(rng), uy(rng)};
    const auto r = true_ranges(t, pair);
    const RangePair swapped{r.r2, r.r1};
    const auto f = equivalent_polar(r, pair);
    const auto g = equivalent_polar(swapped, pair);
    CHECK(std::abs(f.theta - (kPi - g.theta)) < 1e-12);
    CHECK(std::abs(f.r_eq - g.r_eq) < 1e-12);
    const auto s1 = detail::try_equivalent_angular_resolution(r, pair);
    const auto s2 = detail::try_equivalent_angular_resolution(swapped, pair);
    REQUIRE(s1.has_value() == s2.has_value());
    if (s1) {
      CHECK(std::abs(*s1 - *s2) < 1e-12);
      CHECK(std::abs(multisite_error_margin(r, pair) - multisite_error_margin(swapped, pair)) <
            1e-12);
    }
  }
}

TEST_CASE("spread is first-order linear in delta_r") {
  for (int i = 0; i <= 80; i += 4) {
    for (int j = 0; j <= 68; j += 4) {
      // y stays clear of the baseline, where the spread is not smooth in delta_r
      const Point2D t{0.05 * i, 0.6 + 0.05 * j};
      for (const double dr : {0.01, 0.005, 0.001}) {
        const auto r = true_ranges(t, room_pair(dr));
        const auto s = detail::try_equivalent_angular_resolution(r, room_pair(dr));
        const auto s2 = detail::try_equivalent_angular_resolution(r, room_pair(2 * dr));
        if (!s || !s2) continue;
        const double ratio = *s2 / *s;
        CHECK(ratio >= 1.95);
        CHECK(ratio <= 2.05);
      }
    }
  }
}

TEST_CASE("mimo angular resolution") {
  const auto array = room_array();
  CHECK(mimo_angular_resolution(array, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(mimo_angular_resolution(array, kPi / 3) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(mimo_angular_resolution(array, kPi / 2), InvalidSteering);
  CHECK_THROWS_AS(mimo_angular_resolution(array, -kPi / 2 - 0.1), InvalidSteering);

  auto other = array;
  other.wavelength = 0.01;
  other.element_spacing = 0.005;
  CHECK(mimo_angular_resolution(other, 0.0) == doctest::Approx(0.25).epsilon(1e-14));

  double prev = 0.0;
  for (int k = 0; k <= 60; ++k) {
    const double th = kPi / 3 * k / 60.0;
    const double v = mimo_angular_resolution(array, th);
    CHECK(v == mimo_angular_resolution(array, -th));
    CHECK(v > 0.0);
    if (k > 0) CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("mimo error margin") {
  const auto array = room_array();
  CHECK(mimo_error_margin(array, {2.0, 2.0}) == doctest::Approx(0.5 * 2.0 * std::sin(0.25)));
  CHECK(mimo_error_margin(array, {2.0, 2.0}) == doctest::Approx(0.247404).epsilon(1e-6));
  CHECK(mimo_error_margin(array, {2.0, 4.0}) ==
        doctest::Approx(2.0 * mimo_error_margin(array, {2.0, 2.0})).epsilon(1e-14));
  const Point2D at60{2.0 + 2.0 * std::sin(kPi / 3), 2.0 * std::cos(kPi / 3)};
  CHECK(mimo_error_margin(array, at60) == doctest::Approx(0.479426).epsilon(1e-6));
  CHECK_THROWS_AS(mimo_error_margin(array, {0.0, 0.5}), OutsideFov);
  CHECK_THROWS_AS(mimo_error_margin(array, {2.0, -1.0}), OutsideFov);
}

TEST_CASE("range resolution") {
  CHECK(range_resolution(1e9) == doctest::Approx(0.149896229).epsilon(1e-12));
  CHECK(range_resolution(2e9) == doctest::Approx(0.0749481145).epsilon(1e-12));
  CHECK(range_resolution(0.5e9) == doctest::Approx(0.299792458).epsilon(1e-12));
  CHECK_THROWS_AS(range_resolution(0.0), ValidationError);
}

TEST_CASE("config validation") {
  SisoPairConfig p = room_pair();
  p.fov = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = room_pair(-1.0);
  CHECK_THROWS_AS(p.validate(), ValidationError);
  MimoArrayConfig m = room_array();
  m.n_channels = 1;
  CHECK_THROWS_AS(m.validate(), ValidationError);
}
