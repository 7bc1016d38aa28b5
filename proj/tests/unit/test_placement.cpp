#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "radarloc/errors.hpp"
#include "radarloc/placement.hpp"

using namespace radarloc;

namespace {

using Pairs = std::vector<std::pair<double, double>>;

PlacementProblem problem(double lo, double hi, double bmin, double bmax, double step) {
  PlacementProblem p;
  p.wall_lo = lo;
  p.wall_hi = hi;
  p.min_baseline = bmin;
  p.max_baseline = bmax;
  p.search_step = step;
  p.grid = GridSpec{0, 4, 0, 4, 0.2};
  p.eval_step = 0.0;
  return p;
}

// Exhaustive oracle: independent scoring loop over the enumerated candidates.
std::pair<double, std::pair<double, double>> brute_force(const PlacementProblem& p) {
  double best = std::numeric_limits<double>::infinity();
  std::pair<double, double> arg{};
  for (const auto& [a, b] : enumerate_candidates(p)) {
    double v = 0.0;
    try {
      v = placement_objective(p, a, b, p.search_grid());
    } catch (const EmptyMask&) {
      continue;
    }
    if (v < best) {
      best = v;
      arg = {a, b};
    }
  }
  return {best, arg};
}

}  // namespace

TEST_CASE("enumerate_candidates examples") {
  CHECK(enumerate_candidates(problem(0, 4, 1, 1, 1)) == Pairs{{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  CHECK(enumerate_candidates(problem(1, 3, 1, 2, 1)) == Pairs{{1, 2}, {1, 3}, {2, 3}});
  CHECK_THROWS_AS(enumerate_candidates(problem(0, 0.5, 1, 2, 0.1)), NoCandidates);
}

TEST_CASE("enumerate_candidates respects every constraint") {
  const auto p = problem(0.3, 3.7, 0.4, 1.3, 0.1);
  const auto cands = enumerate_candidates(p);
  CHECK(std::is_sorted(cands.begin(), cands.end()));
  for (const auto& [a, b] : cands) {
    CHECK(a < b);
    CHECK(a >= p.wall_lo - 1e-9);
    CHECK(b <= p.wall_hi + 1e-9);
    CHECK(b - a >= p.min_baseline - 1e-9);
    CHECK(b - a <= p.max_baseline + 1e-9);
  }
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(enumerate_candidates(problem(1, 1, 1, 1, 1)), ValidationError);
  CHECK_THROWS_AS(enumerate_candidates(problem(0, 4, 2, 1, 1)), ValidationError);
  CHECK_THROWS_AS(enumerate_candidates(problem(0, 4, 1, 1, 0)), ValidationError);
}

TEST_CASE("single candidate") {
  const auto p = problem(1.5, 2.5, 1, 1, 1);
  const auto r = optimize_placement(p);
  CHECK(r.a == 1.5);
  CHECK(r.b == 2.5);
  CHECK(r.evaluated == 1);
  CHECK(r.objective_value == placement_objective(p, 1.5, 2.5, p.grid));
  CHECK(r.refined_objective_value == r.objective_value);
}

TEST_CASE("optimize matches the exhaustive oracle") {
  for (const auto objective : {PlacementObjective::mean_error, PlacementObjective::max_error}) {
    auto p = problem(0, 4, 0.5, 2.0, 0.25);
    p.objective = objective;
    const auto r = optimize_placement(p, Parallelism{3});
    const auto [best, arg] = brute_force(p);
    CHECK(r.evaluated == enumerate_candidates(p).size());
    CHECK(r.objective_value == best);
    CHECK(r.a == arg.first);
    CHECK(r.b == arg.second);
    for (const auto& [a, b] : enumerate_candidates(p)) {
      CHECK(r.objective_value <= placement_objective(p, a, b, p.grid));
    }
  }
}

TEST_CASE("symmetric problem yields a centred or mirror-tied optimum") {
  auto p = problem(0, 4, 1, 1, 0.25);
  const auto r = optimize_placement(p);
  const double mirror_a = 4.0 - r.b;
  const double mirror_b = 4.0 - r.a;
  const double mirror_value = placement_objective(p, mirror_a, mirror_b, p.grid);
  CHECK(std::abs(mirror_value - r.objective_value) < 1e-12);
  const bool centred = std::abs(0.5 * (r.a + r.b) - 2.0) < 1e-9;
  CHECK((centred || r.a < mirror_a));
}

TEST_CASE("halving the search step never worsens the optimum") {
  auto coarse = problem(0, 4, 0.5, 2.0, 0.5);
  auto fine = coarse;
  fine.search_step = 0.25;
  auto finer = coarse;
  finer.search_step = 0.125;
  const double v0 = optimize_placement(coarse).objective_value;
  const double v1 = optimize_placement(fine).objective_value;
  const double v2 = optimize_placement(finer).objective_value;
  CHECK(v1 <= v0);
  CHECK(v2 <= v1);
}

TEST_CASE("coarse search refines the winner on the full grid") {
  auto p = problem(0, 4, 0.5, 2.0, 0.5);
  p.grid = GridSpec{0, 4, 0, 4, 0.05};
  p.eval_step = 0.2;
  const auto r = optimize_placement(p);
  CHECK(r.objective_value == placement_objective(p, r.a, r.b, p.search_grid()));
  CHECK(r.refined_objective_value == placement_objective(p, r.a, r.b, p.grid));
}

TEST_CASE("result is independent of parallel evaluation") {
  const auto p = problem(0, 4, 0.5, 2.0, 0.25);
  const auto a = optimize_placement(p, Parallelism{1});
  const auto b = optimize_placement(p, Parallelism{8});
  CHECK(a.a == b.a);
  CHECK(a.b == b.b);
  CHECK(a.objective_value == b.objective_value);
}

TEST_CASE("candidates that cover nothing are skipped") {
  auto p = problem(0, 4, 1, 1, 1);
  p.grid = GridSpec{-20, -19, 0.1, 0.3, 0.1};  // far outside every FoV
  CHECK_THROWS_AS(optimize_placement(p), EmptyMask);
}
