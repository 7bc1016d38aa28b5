#include "radarloc/placement.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "parallel.hpp"
#include "radarloc/errors.hpp"

namespace radarloc {

namespace {

// Tolerance for lattice points that land on a bound after rounding.
constexpr double kLatticeSlack = 1e-9;

}  // namespace

GridSpec PlacementProblem::search_grid() const noexcept {
  return eval_step > 0.0 ? grid.with_step(eval_step) : grid;
}

void PlacementProblem::validate() const {
  if (!std::isfinite(wall_lo) || !std::isfinite(wall_hi) || !(wall_lo < wall_hi)) {
    throw ValidationError("wall interval must satisfy lo < hi");
  }
  if (!(min_baseline > 0.0) || !(min_baseline <= max_baseline) || !std::isfinite(max_baseline)) {
    throw ValidationError("baselines must satisfy 0 < min <= max");
  }
  if (!(search_step > 0.0) || !std::isfinite(search_step)) {
    throw ValidationError("search_step must be positive");
  }
  if (!(delta_r > 0.0)) throw ValidationError("delta_r must be positive");
  if (!(fov > 0.0 && fov <= std::numbers::pi)) throw ValidationError("fov must lie in (0, pi]");
  grid.validate();
  search_grid().validate();
}

std::vector<std::pair<double, double>> enumerate_candidates(const PlacementProblem& problem) {
  problem.validate();
  std::vector<std::pair<double, double>> out;
  const double s = problem.search_step;
  for (std::size_t i = 0;; ++i) {
    const double a = problem.wall_lo + static_cast<double>(i) * s;
    if (a + problem.min_baseline > problem.wall_hi + kLatticeSlack) break;
    for (std::size_t j = 0;; ++j) {
      const double baseline = problem.min_baseline + static_cast<double>(j) * s;
      if (baseline > problem.max_baseline + kLatticeSlack) break;
      const double b = a + baseline;
      if (b > problem.wall_hi + kLatticeSlack) break;
      out.emplace_back(a, b);
    }
  }
  if (out.empty()) {
    throw NoCandidates("no node pair with baseline in [" + std::to_string(problem.min_baseline) +
                       ", " + std::to_string(problem.max_baseline) + "] fits the wall");
  }
  return out;
}

double placement_objective(const PlacementProblem& problem, double a, double b,
                           const GridSpec& grid) {
  const SisoPairConfig pair{a, b, problem.fov, problem.delta_r};
  // Candidate maps run serially; parallelism is across candidates.
  const FieldStats stats = field_stats(multisite_error_map(pair, grid, Parallelism{1}));
  return problem.objective == PlacementObjective::mean_error ? stats.mean : stats.max;
}

PlacementResult optimize_placement(const PlacementProblem& problem, Parallelism par) {
  const auto candidates = enumerate_candidates(problem);
  const GridSpec grid = problem.search_grid();

  std::vector<std::optional<double>> scores(candidates.size());
  detail::parallel_for(candidates.size(), par.threads, [&](std::size_t k) {
    try {
      scores[k] = placement_objective(problem, candidates[k].first, candidates[k].second, grid);
    } catch (const EmptyMask&) {
      scores[k] = std::nullopt;
    }
  });

  PlacementResult result;
  result.evaluated = candidates.size();
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (!scores[k]) {
      ++result.skipped;
      continue;
    }
    // Candidates are in lexicographic order, so strict < keeps the smallest pair on ties.
    if (!best || *scores[k] < *scores[*best]) best = k;
  }
  if (!best) throw EmptyMask("no candidate placement covers any grid cell");

  result.a = candidates[*best].first;
  result.b = candidates[*best].second;
  result.objective_value = *scores[*best];
  result.refined_objective_value =
      grid == problem.grid ? result.objective_value
                           : placement_objective(problem, result.a, result.b, problem.grid);
  return result;
}

}  // namespace radarloc
