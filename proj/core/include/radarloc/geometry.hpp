#pragma once

// Closed-form localization geometry for a monostatic MIMO array and a pair of
// range-only SISO nodes mounted on the y = 0 wall.
//
// Conventions: lengths in metres, angles in radians. MIMO steering angles are
// measured from broadside (+y). Equivalent azimuths are measured from the +x
// axis at the midpoint of the SISO baseline.

#include <numbers>
#include <optional>

namespace radarloc {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

double distance(Point2D p, Point2D q) noexcept;

/// Two range-only nodes at (a, 0) and (b, 0).
struct SisoPairConfig {
  double a = 1.5;
  double b = 2.5;
  double fov = 2.0 * std::numbers::pi / 3.0;  // full cone
  double delta_r = kSpeedOfLight / 2.0e9;     // range resolution at B = 1 GHz

  double midpoint() const noexcept { return 0.5 * (a + b); }
  double baseline() const noexcept { return a > b ? a - b : b - a; }

  /// Throws ValidationError unless a != b, fov in (0, pi], delta_r > 0.
  void validate() const;
};

struct MimoArrayConfig {
  Point2D position{2.0, 0.0};
  int n_channels = 8;
  double wavelength = kSpeedOfLight / 60.0e9;
  double element_spacing = kSpeedOfLight / 60.0e9 / 2.0;
  double fov = 2.0 * std::numbers::pi / 3.0;

  /// Physical aperture L = n_channels * element_spacing.
  double aperture() const noexcept { return n_channels * element_spacing; }

  void validate() const;
};

struct RangePair {
  double r1 = 0.0;
  double r2 = 0.0;
};

struct PolarFix {
  double r_eq = 0.0;
  double theta = 0.0;  // from +x at the baseline midpoint
};

/// Forward model: distances from the target to both nodes.
RangePair true_ranges(Point2D target, const SisoPairConfig& pair);

/// Intersects the two range circles and returns the y >= 0 solution.
///
/// x uses the signed quotient (a^2 - b^2 - r1^2 + r2^2) / (2 (a - b)) so that
/// true_ranges followed by triangulate is an identity for every node order.
/// Inputs that miss intersection by less than 1e-9 * (r1 + r2 + |a - b|) are
/// clamped to tangency. Throws DegenerateBaseline when a == b and
/// InfeasibleGeometry when the circles do not meet.
Point2D triangulate(RangePair ranges, const SisoPairConfig& pair);

/// Range and azimuth of the triangulated point seen from the baseline midpoint.
/// r_eq follows the median-length closed form sqrt(2(r1^2 + r2^2) - d^2) / 2.
PolarFix equivalent_polar(RangePair ranges, const SisoPairConfig& pair);

/// Azimuth spread |theta(r1, r2 + dr) - theta(r1 + dr, r2)| with dr = pair.delta_r.
double equivalent_angular_resolution(RangePair ranges, const SisoPairConfig& pair);

/// Half the arc subtended by the equivalent angular resolution at r_eq.
double multisite_error_margin(RangePair ranges, const SisoPairConfig& pair);

/// Rayleigh beamwidth lambda / (L cos(steering)). Throws InvalidSteering when
/// cos(steering) <= 0.
double mimo_angular_resolution(const MimoArrayConfig& array, double steering_angle);

/// Angle of `target` from the array broadside, positive towards +x.
double steering_angle(const MimoArrayConfig& array, Point2D target) noexcept;

/// Half the arc subtended by the array beamwidth at the target range.
/// Throws OutsideFov when the target is behind the wall or outside the cone.
double mimo_error_margin(const MimoArrayConfig& array, Point2D target);

/// FMCW range resolution c / (2 B).
double range_resolution(double bandwidth_hz);

namespace detail {

// Non-throwing cores shared with the map builders. std::nullopt means the
// input is infeasible; precondition violations still throw.
std::optional<Point2D> try_triangulate(RangePair ranges, const SisoPairConfig& pair) noexcept;
std::optional<PolarFix> try_equivalent_polar(RangePair ranges, const SisoPairConfig& pair) noexcept;
std::optional<double> try_equivalent_angular_resolution(RangePair ranges,
                                                        const SisoPairConfig& pair) noexcept;

/// FoV test shared by the map masks and mimo_error_margin.
bool within_fov(Point2D origin, double fov, Point2D p) noexcept;

}  // namespace detail

}  // namespace radarloc
