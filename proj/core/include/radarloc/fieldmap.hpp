#pragma once

// Per-cell evaluation of the localization metrics over a rectangular room
// grid, summary statistics, and end-to-end Monte-Carlo localization.

#include <cstdint>
#include <optional>
#include <vector>

#include "radarloc/geometry.hpp"
#include "radarloc/signal_chain.hpp"

namespace radarloc {

/// Cell (i, j) is centred at (x_min + (i + 1/2) step, y_min + (j + 1/2) step).
struct GridSpec {
  double x_min = 0.0;
  double x_max = 4.0;
  double y_min = 0.0;
  double y_max = 4.0;
  double step = 0.05;

  std::size_t nx() const noexcept;
  std::size_t ny() const noexcept;
  Point2D cell_center(std::size_t i, std::size_t j) const noexcept;

  /// Same bounds, different step.
  GridSpec with_step(double s) const noexcept;

  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Row-major (j * nx + i) cell mask; 1 = inside FoV and feasible.
using CellMask = std::vector<std::uint8_t>;

struct ScalarField {
  GridSpec grid;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> values;  // NaN where mask is 0
  CellMask mask;

  explicit ScalarField(const GridSpec& g = {});

  std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * nx + i; }
  double value(std::size_t i, std::size_t j) const noexcept { return values[index(i, j)]; }
  bool valid(std::size_t i, std::size_t j) const noexcept { return mask[index(i, j)] != 0; }
};

struct FieldStats {
  double max = 0.0;
  double mean = 0.0;
  std::size_t count = 0;
};

struct MonteCarloReport {
  Point2D target;
  std::size_t trials = 0;
  std::size_t failures = 0;       // NoDetection or InfeasibleGeometry trials
  std::vector<double> errors_m;   // successful trials, in trial order
  double p95_m = 0.0;             // nearest-rank percentile
  double mean_m = 0.0;
  double analytic_margin_m = 0.0;
};

/// Worker count for map construction; 0 picks std::thread::hardware_concurrency().
/// Results never depend on this value.
struct Parallelism {
  unsigned threads = 0;
};

CellMask fov_mask(Point2D origin, const GridSpec& grid, double fov);

ScalarField mimo_resolution_map(const MimoArrayConfig& array, const GridSpec& grid,
                                Parallelism par = {});
ScalarField mimo_error_map(const MimoArrayConfig& array, const GridSpec& grid,
                           Parallelism par = {});
ScalarField multisite_resolution_map(const SisoPairConfig& pair, const GridSpec& grid,
                                     Parallelism par = {});
ScalarField multisite_error_map(const SisoPairConfig& pair, const GridSpec& grid,
                                Parallelism par = {});

/// Throws EmptyMask when no cell is valid.
FieldStats field_stats(const ScalarField& field);

/// Fraction of jointly valid cells where a < b. Throws GridMismatch when the
/// grids differ and EmptyMask when the joint mask is empty.
double dominance_fraction(const ScalarField& a, const ScalarField& b);

/// Runs `trials` independent two-node range measurements of `target`,
/// triangulates each and records the position error. Trial t uses seeds
/// derived from (seed, t, node), so the report is independent of `par`.
/// Throws OutsideFov when the target is not seen by both nodes and
/// ValidationError when trials < 100.
MonteCarloReport monte_carlo_localize(const SisoPairConfig& pair, const ChirpConfig& chirp,
                                      const CfarConfig& cfar, Point2D target,
                                      std::optional<double> snr_db, std::size_t trials,
                                      std::uint64_t seed, Parallelism par = {});

/// SplitMix64 finalizer; used to derive per-cell and per-trial seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

}  // namespace radarloc
