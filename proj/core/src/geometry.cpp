#include "radarloc/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "radarloc/errors.hpp"

namespace radarloc {

namespace {

constexpr double kFeasibilitySlack = 1e-9;
constexpr double kFovSlack = 1e-12;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void require_ranges(RangePair r) {
  if (!positive_finite(r.r1) || !positive_finite(r.r2)) {
    throw ValidationError("ranges must be positive and finite (r1=" + std::to_string(r.r1) +
                          ", r2=" + std::to_string(r.r2) + ")");
  }
}

void require_pair(const SisoPairConfig& pair) {
  if (pair.a == pair.b) {
    throw DegenerateBaseline("node positions coincide at x=" + std::to_string(pair.a));
  }
  pair.validate();
}

// Offset of the intersection from the baseline midpoint along x, and the
// squared height. Both are written symmetrically in (r1, r2) so that swapping
// the ranges mirrors the solution exactly.
struct Intersection {
  double offset;
  double height_sq;
};

std::optional<Intersection> intersect(RangePair r, const SisoPairConfig& pair) noexcept {
  if (pair.a == pair.b || !(r.r1 > 0.0) || !(r.r2 > 0.0)) return std::nullopt;
  const double d = pair.baseline();
  const double slack = kFeasibilitySlack * (r.r1 + r.r2 + d);
  if (std::abs(r.r1 - r.r2) > d + slack || d > r.r1 + r.r2 + slack) return std::nullopt;

  const double offset = (r.r2 - r.r1) * (r.r2 + r.r1) / (2.0 * (pair.a - pair.b));
  double height_sq = 0.5 * (r.r1 * r.r1 + r.r2 * r.r2) - offset * offset - 0.25 * d * d;
  if (height_sq < 0.0) height_sq = 0.0;  // within slack: tangent circles
  return Intersection{offset, height_sq};
}

}  // namespace

double distance(Point2D p, Point2D q) noexcept { return std::hypot(p.x - q.x, p.y - q.y); }

void SisoPairConfig::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b)) throw ValidationError("node positions must be finite");
  if (a == b) throw ValidationError("node positions must differ");
  if (!(fov > 0.0 && fov <= std::numbers::pi)) throw ValidationError("fov must lie in (0, pi]");
  if (!positive_finite(delta_r)) throw ValidationError("delta_r must be positive");
}

void MimoArrayConfig::validate() const {
  if (!std::isfinite(position.x) || !std::isfinite(position.y)) {
    throw ValidationError("array position must be finite");
  }
  if (n_channels < 2) throw ValidationError("n_channels must be at least 2");
  if (!positive_finite(wavelength)) throw ValidationError("wavelength must be positive");
  if (!positive_finite(element_spacing)) throw ValidationError("element_spacing must be positive");
  if (!(fov > 0.0 && fov <= std::numbers::pi)) throw ValidationError("fov must lie in (0, pi]");
}

RangePair true_ranges(Point2D target, const SisoPairConfig& pair) {
  return {std::hypot(target.x - pair.a, target.y), std::hypot(target.x - pair.b, target.y)};
}

namespace detail {

std::optional<Point2D> try_triangulate(RangePair ranges, const SisoPairConfig& pair) noexcept {
  const auto hit = intersect(ranges, pair);
  if (!hit) return std::nullopt;
  return Point2D{pair.midpoint() + hit->offset, std::sqrt(hit->height_sq)};
}

std::optional<PolarFix> try_equivalent_polar(RangePair ranges, const SisoPairConfig& pair) noexcept {
  const auto hit = intersect(ranges, pair);
  if (!hit) return std::nullopt;
  const double d = pair.baseline();
  double median_sq = 2.0 * (ranges.r1 * ranges.r1 + ranges.r2 * ranges.r2) - d * d;
  if (median_sq < -kFeasibilitySlack * d * d) return std::nullopt;
  if (median_sq < 0.0) median_sq = 0.0;
  return PolarFix{0.5 * std::sqrt(median_sq), std::atan2(std::sqrt(hit->height_sq), hit->offset)};
}

std::optional<double> try_equivalent_angular_resolution(RangePair ranges,
                                                        const SisoPairConfig& pair) noexcept {
  const double dr = pair.delta_r;
  const auto first = try_equivalent_polar({ranges.r1, ranges.r2 + dr}, pair);
  const auto second = try_equivalent_polar({ranges.r1 + dr, ranges.r2}, pair);
  if (!first || !second) return std::nullopt;
  return std::abs(first->theta - second->theta);
}

bool within_fov(Point2D origin, double fov, Point2D p) noexcept {
  if (!(p.y > origin.y)) return false;
  const double off_axis = std::atan2(p.x - origin.x, p.y - origin.y);
  return std::abs(off_axis) <= 0.5 * fov + kFovSlack;
}

}  // namespace detail

Point2D triangulate(RangePair ranges, const SisoPairConfig& pair) {
  require_pair(pair);
  require_ranges(ranges);
  if (auto p = detail::try_triangulate(ranges, pair)) return *p;
  throw InfeasibleGeometry("range circles r1=" + std::to_string(ranges.r1) +
                           ", r2=" + std::to_string(ranges.r2) + " do not intersect");
}

PolarFix equivalent_polar(RangePair ranges, const SisoPairConfig& pair) {
  require_pair(pair);
  require_ranges(ranges);
  if (auto fix = detail::try_equivalent_polar(ranges, pair)) return *fix;
  throw InfeasibleGeometry("range circles r1=" + std::to_string(ranges.r1) +
                           ", r2=" + std::to_string(ranges.r2) + " do not intersect");
}

double equivalent_angular_resolution(RangePair ranges, const SisoPairConfig& pair) {
  require_pair(pair);
  require_ranges(ranges);
  if (auto spread = detail::try_equivalent_angular_resolution(ranges, pair)) return *spread;
  throw InfeasibleGeometry("a range perturbed by delta_r=" + std::to_string(pair.delta_r) +
                           " leaves the feasible region");
}

double multisite_error_margin(RangePair ranges, const SisoPairConfig& pair) {
  const double spread = equivalent_angular_resolution(ranges, pair);
  const PolarFix fix = equivalent_polar(ranges, pair);
  return 0.5 * fix.r_eq * std::sin(spread);
}

double mimo_angular_resolution(const MimoArrayConfig& array, double steering) {
  array.validate();
  const double c = std::cos(steering);
  // cos(pi/2) rounds to 6e-17, so test the angle as well
  if (!(c > 0.0) || !(std::abs(steering) < std::numbers::pi / 2)) {
    throw InvalidSteering("steering angle " + std::to_string(steering) +
                          " rad is at or beyond endfire");
  }
  return array.wavelength / (array.aperture() * c);
}

double steering_angle(const MimoArrayConfig& array, Point2D target) noexcept {
  return std::atan2(target.x - array.position.x, target.y - array.position.y);
}

double mimo_error_margin(const MimoArrayConfig& array, Point2D target) {
  array.validate();
  if (!detail::within_fov(array.position, array.fov, target)) {
    throw OutsideFov("target (" + std::to_string(target.x) + ", " + std::to_string(target.y) +
                     ") is outside the array field of view");
  }
  const double spread = mimo_angular_resolution(array, steering_angle(array, target));
  return 0.5 * distance(target, array.position) * std::sin(spread);
}

double range_resolution(double bandwidth_hz) {
  if (!positive_finite(bandwidth_hz)) throw ValidationError("bandwidth must be positive");
  return kSpeedOfLight / (2.0 * bandwidth_hz);
}

}  // namespace radarloc
