#include "radarloc/fieldmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "parallel.hpp"
#include "radarloc/errors.hpp"

namespace radarloc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t cell_count(double lo, double hi, double step) noexcept {
  const double n = std::floor((hi - lo) / step + 1e-9);
  return n > 0.0 ? static_cast<std::size_t>(n) : 0;
}

// Fills every cell with eval(center) -> optional<double>; nullopt cells are
// masked out. `prefilter` cheaply rejects cells before eval runs.
template <typename Prefilter, typename Eval>
ScalarField build_field(const GridSpec& grid, Parallelism par, Prefilter prefilter, Eval eval) {
  grid.validate();
  ScalarField field(grid);
  detail::parallel_for(field.ny, par.threads, [&](std::size_t j) {
    for (std::size_t i = 0; i < field.nx; ++i) {
      const Point2D c = grid.cell_center(i, j);
      if (!prefilter(c)) continue;
      if (const std::optional<double> v = eval(c); v && std::isfinite(*v)) {
        field.values[field.index(i, j)] = *v;
        field.mask[field.index(i, j)] = 1;
      }
    }
  });
  return field;
}

std::optional<double> mimo_resolution_at(const MimoArrayConfig& array, Point2D c) {
  const double cs = std::cos(steering_angle(array, c));
  if (!(cs > 0.0)) return std::nullopt;
  return array.wavelength / (array.aperture() * cs);
}

auto multisite_prefilter(const SisoPairConfig& pair, const GridSpec& grid) {
  return [&pair, half = 0.5 * grid.step](Point2D c) {
    return c.y >= half && detail::within_fov({pair.a, 0.0}, pair.fov, c) &&
           detail::within_fov({pair.b, 0.0}, pair.fov, c);
  };
}

}  // namespace

std::size_t GridSpec::nx() const noexcept { return cell_count(x_min, x_max, step); }
std::size_t GridSpec::ny() const noexcept { return cell_count(y_min, y_max, step); }

Point2D GridSpec::cell_center(std::size_t i, std::size_t j) const noexcept {
  return {x_min + (static_cast<double>(i) + 0.5) * step,
          y_min + (static_cast<double>(j) + 0.5) * step};
}

GridSpec GridSpec::with_step(double s) const noexcept {
  GridSpec g = *this;
  g.step = s;
  return g;
}

void GridSpec::validate() const {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) ||
      !std::isfinite(y_max)) {
    throw ValidationError("grid bounds must be finite");
  }
  if (!(x_max > x_min) || !(y_max > y_min)) throw ValidationError("grid bounds are empty");
  if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("grid step must be positive");
  if (nx() == 0 || ny() == 0) throw ValidationError("grid step exceeds the grid extent");
}

ScalarField::ScalarField(const GridSpec& g)
    : grid(g), nx(g.nx()), ny(g.ny()), values(nx * ny, kNaN), mask(nx * ny, 0) {}

CellMask fov_mask(Point2D origin, const GridSpec& grid, double fov) {
  grid.validate();
  if (!(fov > 0.0 && fov <= std::numbers::pi)) throw ValidationError("fov must lie in (0, pi]");
  const std::size_t nx = grid.nx();
  const std::size_t ny = grid.ny();
  CellMask mask(nx * ny, 0);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      mask[j * nx + i] = detail::within_fov(origin, fov, grid.cell_center(i, j)) ? 1 : 0;
    }
  }
  return mask;
}

ScalarField mimo_resolution_map(const MimoArrayConfig& array, const GridSpec& grid,
                                Parallelism par) {
  array.validate();
  return build_field(
      grid, par, [&](Point2D c) { return detail::within_fov(array.position, array.fov, c); },
      [&](Point2D c) { return mimo_resolution_at(array, c); });
}

ScalarField mimo_error_map(const MimoArrayConfig& array, const GridSpec& grid, Parallelism par) {
  array.validate();
  return build_field(
      grid, par, [&](Point2D c) { return detail::within_fov(array.position, array.fov, c); },
      [&](Point2D c) -> std::optional<double> {
        const auto res = mimo_resolution_at(array, c);
        if (!res) return std::nullopt;
        return 0.5 * distance(c, array.position) * std::sin(*res);
      });
}

ScalarField multisite_resolution_map(const SisoPairConfig& pair, const GridSpec& grid,
                                     Parallelism par) {
  pair.validate();
  return build_field(grid, par, multisite_prefilter(pair, grid), [&](Point2D c) {
    return detail::try_equivalent_angular_resolution(true_ranges(c, pair), pair);
  });
}

ScalarField multisite_error_map(const SisoPairConfig& pair, const GridSpec& grid,
                                Parallelism par) {
  pair.validate();
  return build_field(
      grid, par, multisite_prefilter(pair, grid), [&](Point2D c) -> std::optional<double> {
        const RangePair r = true_ranges(c, pair);
        const auto spread = detail::try_equivalent_angular_resolution(r, pair);
        const auto fix = detail::try_equivalent_polar(r, pair);
        if (!spread || !fix) return std::nullopt;
        return 0.5 * fix->r_eq * std::sin(*spread);
      });
}

FieldStats field_stats(const ScalarField& field) {
  FieldStats s;
  s.max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (std::size_t k = 0; k < field.values.size(); ++k) {
    if (!field.mask[k]) continue;
    s.max = std::max(s.max, field.values[k]);
    sum += field.values[k];
    ++s.count;
  }
  if (s.count == 0) throw EmptyMask("field has no valid cells");
  s.mean = sum / static_cast<double>(s.count);
  return s;
}

double dominance_fraction(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid == b.grid) || a.nx != b.nx || a.ny != b.ny) {
    throw GridMismatch("fields are defined on different grids");
  }
  std::size_t joint = 0;
  std::size_t wins = 0;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    if (!a.mask[k] || !b.mask[k]) continue;
    ++joint;
    if (a.values[k] < b.values[k]) ++wins;
  }
  if (joint == 0) throw EmptyMask("fields share no valid cells");
  return static_cast<double>(wins) / static_cast<double>(joint);
}

std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

MonteCarloReport monte_carlo_localize(const SisoPairConfig& pair, const ChirpConfig& chirp,
                                      const CfarConfig& cfar, Point2D target,
                                      std::optional<double> snr_db, std::size_t trials,
                                      std::uint64_t seed, Parallelism par) {
  pair.validate();
  chirp.validate();
  cfar.validate();
  if (trials < 100) {
    throw ValidationError("Monte-Carlo needs at least 100 trials (got " + std::to_string(trials) +
                          ")");
  }
  if (!detail::within_fov({pair.a, 0.0}, pair.fov, target) ||
      !detail::within_fov({pair.b, 0.0}, pair.fov, target)) {
    throw OutsideFov("target is not inside both node fields of view");
  }

  const RangePair truth = true_ranges(target, pair);
  MonteCarloReport report;
  report.target = target;
  report.trials = trials;
  report.analytic_margin_m = multisite_error_margin(truth, pair);

  // Range aliasing is a property of the configuration, not of a trial.
  if (std::max(truth.r1, truth.r2) >= chirp.max_range()) {
    throw RangeAliased("target range exceeds the unaliased maximum of the chirp");
  }

  std::vector<double> per_trial(trials, kNaN);
  detail::parallel_for(trials, par.threads, [&](std::size_t t) {
    const std::uint64_t base = seed ^ (2 * static_cast<std::uint64_t>(t));
    const Target node1[] = {{truth.r1, 1.0}};
    const Target node2[] = {{truth.r2, 1.0}};
    try {
      const Detection d1 = estimate_range(chirp, node1, snr_db, mix_seed(base), cfar);
      const Detection d2 = estimate_range(chirp, node2, snr_db, mix_seed(base + 1), cfar);
      if (auto p = detail::try_triangulate({d1.range_m, d2.range_m}, pair)) {
        per_trial[t] = distance(*p, target);
      }
    } catch (const NoDetection&) {
      // counted below
    }
  });

  for (double e : per_trial) {
    if (std::isnan(e)) {
      ++report.failures;
    } else {
      report.errors_m.push_back(e);
    }
  }
  if (report.errors_m.empty()) {
    report.p95_m = report.mean_m = kNaN;
    return report;
  }
  std::vector<double> sorted = report.errors_m;
  std::sort(sorted.begin(), sorted.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(sorted.size())));
  report.p95_m = sorted[std::max<std::size_t>(rank, 1) - 1];
  report.mean_m = std::accumulate(report.errors_m.begin(), report.errors_m.end(), 0.0) /
                  static_cast<double>(report.errors_m.size());
  return report;
}

}  // namespace radarloc
