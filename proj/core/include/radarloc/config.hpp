#pragma once

// Flat `key = value` run configuration. Lengths in metres, frequencies in Hz,
// angles in degrees at this boundary only. Absent keys take the defaults of
// the reference room setup: B = 1 GHz, 8 channels, 256 samples, 60 GHz
// carrier, nodes at x = 1.5 and 2.5 m, MIMO array at (2, 0), 120 degree FoV,
// 4 m x 4 m room at 0.05 m.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radarloc/fieldmap.hpp"
#include "radarloc/placement.hpp"
#include "radarloc/signal_chain.hpp"

namespace radarloc {

struct RunConfig {
  ChirpConfig chirp;
  MimoArrayConfig mimo;
  SisoPairConfig pair;
  GridSpec grid;
  CfarConfig cfar;
  PlacementProblem placement;

  // Monte-Carlo settings used by `simulate`.
  Point2D target{2.0, 2.0};
  std::optional<double> snr_db = 20.0;
  std::size_t trials = 500;

  std::string output_dir = "out";
  std::uint64_t seed = 1;
  unsigned threads = 0;

  // Values as written, kept so that fingerprints and round-trips do not
  // depend on derived quantities.
  double fov_deg = 120.0;
  std::optional<double> delta_r_m;          // nullopt = auto, c / (2 B)
  std::optional<double> element_spacing_m;  // nullopt = half wavelength
};

/// Keys accepted by parse_config, in canonical order.
const std::vector<std::string_view>& config_keys();

/// Parses a config document. Blank lines and `#` comments are ignored.
/// Throws ParseError (with line), UnknownKey or ValidationError.
RunConfig parse_config(std::string_view text);

/// Applies one `key = value` assignment on top of `cfg` and re-derives
/// dependent fields. Used for command-line overrides.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Recomputes derived fields (wavelength, spacing, delta_r, fov in radians,
/// placement defaults) and validates every component.
void finalize_config(RunConfig& cfg);

/// Canonical `key = value` rendering; parse_config(canonical_form(c)) == c.
std::string canonical_form(const RunConfig& cfg);

/// FNV-1a 64 of canonical_form, as 16 lowercase hex digits. Output
/// location and thread count are excluded.
std::string config_fingerprint(const RunConfig& cfg);

}  // namespace radarloc
