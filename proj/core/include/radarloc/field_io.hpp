#pragma once

// Field serialization.
//
// CSV: a `# key: value` comment block (metric, units, grid, fingerprint),
// then the header row `x_m,y_m,value,mask` and one row per cell in row-major
// order (y outer, x inner). Numbers are fixed-point with 9 decimals; invalid
// cells are written as `nan,0`. LF line endings.
//
// PGM: plain P2, maxval 255, largest y first. Valid cells are min-max
// normalized (a constant field maps to 255); invalid cells are 0.

#include <filesystem>
#include <string>
#include <utility>

#include "radarloc/fieldmap.hpp"

namespace radarloc {

struct FieldFileHeader {
  std::string metric;
  std::string units;
  GridSpec grid;
  std::string fingerprint;

  friend bool operator==(const FieldFileHeader&, const FieldFileHeader&) = default;
};

std::string format_field_csv(const ScalarField& field, const FieldFileHeader& header);
std::pair<ScalarField, FieldFileHeader> parse_field_csv(std::string_view text);

/// Throws IoError on write failure.
void write_field_csv(const ScalarField& field, const FieldFileHeader& header,
                     const std::filesystem::path& path);
/// Throws IoError on read failure and ValidationError on malformed content.
std::pair<ScalarField, FieldFileHeader> read_field_csv(const std::filesystem::path& path);

/// `comment`, when non-empty, is emitted as a `# ...` line after the magic.
/// Throws EmptyMask when the field has no valid cell.
std::string format_field_pgm(const ScalarField& field, const std::string& comment = {});
void write_field_pgm(const ScalarField& field, const std::filesystem::path& path,
                     const std::string& comment = {});

/// Whole-file write; throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace radarloc
