#pragma once

// Exhaustive search for the SISO node pair on a straight wall (y = 0) that
// minimizes a statistic of the multi-site error map over a coverage grid.

#include <utility>
#include <vector>

#include "radarloc/fieldmap.hpp"

namespace radarloc {

enum class PlacementObjective { mean_error, max_error };

struct PlacementProblem {
  double wall_lo = 0.0;
  double wall_hi = 4.0;
  double min_baseline = 0.5;
  double max_baseline = 2.0;
  GridSpec grid{};             // coverage region; also the refinement grid
  double eval_step = 0.1;      // map step used while searching; <= 0 means grid.step
  PlacementObjective objective = PlacementObjective::mean_error;
  double search_step = 0.25;
  double delta_r = kSpeedOfLight / 2.0e9;
  double fov = 2.0 * std::numbers::pi / 3.0;

  /// Grid on which candidates are scored.
  GridSpec search_grid() const noexcept;

  void validate() const;
};

struct PlacementResult {
  double a = 0.0;
  double b = 0.0;
  /// Objective of the winner on search_grid(); the minimum over all scored candidates.
  double objective_value = 0.0;
  /// Objective of the winner re-evaluated on problem.grid.
  double refined_objective_value = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // candidates whose map had no valid cell
};

/// Pairs (a, b) with a = wall_lo + i step, b = a + min_baseline + j step,
/// baseline <= max_baseline and b <= wall_hi; lexicographic order.
/// Throws NoCandidates when the constraints admit none.
std::vector<std::pair<double, double>> enumerate_candidates(const PlacementProblem& problem);

/// Objective statistic of the multi-site error map for one candidate on `grid`.
/// Throws EmptyMask when the candidate covers no cell.
double placement_objective(const PlacementProblem& problem, double a, double b,
                           const GridSpec& grid);

/// Scores every candidate and returns the minimizer (ties: smallest (a, b)).
PlacementResult optimize_placement(const PlacementProblem& problem, Parallelism par = {});

}  // namespace radarloc
