#include "radarloc/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "radarloc/errors.hpp"

namespace radarloc {

namespace {

std::string fixed9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) return out;
    s.remove_prefix(pos + 1);
  }
}

double parse_number(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) {
    throw ValidationError("malformed number '" + tmp + "' in field file");
  }
  return v;
}

}  // namespace

std::string format_field_csv(const ScalarField& field, const FieldFileHeader& header) {
  const GridSpec& g = header.grid;
  std::string out;
  out += "# metric: " + header.metric + "\n";
  out += "# units: " + header.units + "\n";
  out += "# grid: " + exact(g.x_min) + "," + exact(g.x_max) + "," + exact(g.y_min) + "," +
         exact(g.y_max) + "," + exact(g.step) + "\n";
  out += "# fingerprint: " + header.fingerprint + "\n";
  out += "x_m,y_m,value,mask\n";
  for (std::size_t j = 0; j < field.ny; ++j) {
    for (std::size_t i = 0; i < field.nx; ++i) {
      const Point2D c = field.grid.cell_center(i, j);
      out += fixed9(c.x);
      out += ',';
      out += fixed9(c.y);
      out += ',';
      out += field.valid(i, j) ? fixed9(field.value(i, j)) + ",1" : std::string("nan,0");
      out += '\n';
    }
  }
  return out;
}

std::pair<ScalarField, FieldFileHeader> parse_field_csv(std::string_view text) {
  FieldFileHeader header;
  bool have_grid = false;
  std::vector<std::pair<double, bool>> cells;
  bool seen_columns = false;

  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (line.empty()) continue;

    if (line.front() == '#') {
      const std::string_view body = trim(line.substr(1));
      const auto colon = body.find(':');
      if (colon == std::string_view::npos) continue;
      const std::string_view key = trim(body.substr(0, colon));
      const std::string_view value = trim(body.substr(colon + 1));
      if (key == "metric") {
        header.metric = value;
      } else if (key == "units") {
        header.units = value;
      } else if (key == "fingerprint") {
        header.fingerprint = value;
      } else if (key == "grid") {
        const auto parts = split(value, ',');
        if (parts.size() != 5) throw ValidationError("grid comment needs 5 numbers");
        header.grid = {parse_number(parts[0]), parse_number(parts[1]), parse_number(parts[2]),
                       parse_number(parts[3]), parse_number(parts[4])};
        have_grid = true;
      }
      continue;
    }
    if (!seen_columns) {
      if (line != "x_m,y_m,value,mask") throw ValidationError("missing CSV column header");
      seen_columns = true;
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 4) throw ValidationError("CSV row must have 4 columns");
    cells.emplace_back(parse_number(cols[2]), cols[3] == "1");
  }

  if (!have_grid) throw ValidationError("field file lacks a grid comment");
  header.grid.validate();
  ScalarField field(header.grid);
  if (cells.size() != field.values.size()) {
    throw ValidationError("field file has " + std::to_string(cells.size()) + " rows, grid needs " +
                          std::to_string(field.values.size()));
  }
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (cells[k].second) {
      field.values[k] = cells[k].first;
      field.mask[k] = 1;
    }
  }
  return {std::move(field), std::move(header)};
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_field_csv(const ScalarField& field, const FieldFileHeader& header,
                     const std::filesystem::path& path) {
  write_text_file(path, format_field_csv(field, header));
}

std::pair<ScalarField, FieldFileHeader> read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return parse_field_csv(buf.str());
}

std::string format_field_pgm(const ScalarField& field, const std::string& comment) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  bool any = false;
  for (std::size_t k = 0; k < field.values.size(); ++k) {
    if (!field.mask[k]) continue;
    lo = std::min(lo, field.values[k]);
    hi = std::max(hi, field.values[k]);
    any = true;
  }
  if (!any) throw EmptyMask("cannot render a field with no valid cells");

  std::string out = "P2\n";
  if (!comment.empty()) out += "# " + comment + "\n";
  out += std::to_string(field.nx) + " " + std::to_string(field.ny) + "\n255\n";

  constexpr std::size_t kPerLine = 17;  // keeps lines under 70 characters
  for (std::size_t row = 0; row < field.ny; ++row) {
    const std::size_t j = field.ny - 1 - row;
    for (std::size_t i = 0; i < field.nx; ++i) {
      int pixel = 0;
      if (field.valid(i, j)) {
        pixel = hi > lo ? static_cast<int>(std::lround((field.value(i, j) - lo) / (hi - lo) * 255.0))
                        : 255;
      }
      out += std::to_string(pixel);
      out += (i + 1 == field.nx || (i + 1) % kPerLine == 0) ? '\n' : ' ';
    }
  }
  return out;
}

void write_field_pgm(const ScalarField& field, const std::filesystem::path& path,
                     const std::string& comment) {
  write_text_file(path, format_field_pgm(field, comment));
}

}  // namespace radarloc
