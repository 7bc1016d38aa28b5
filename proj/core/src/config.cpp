#include "radarloc/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "radarloc/errors.hpp"

namespace radarloc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw ValidationError(std::string(key) + ": expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

template <typename Int>
Int to_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  Int v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ValidationError(std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> to_list(std::string_view key, std::string_view text, std::size_t min_n,
                            std::size_t max_n) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(to_double(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.size() < min_n || out.size() > max_n) {
    throw ValidationError(std::string(key) + ": expected " + std::to_string(min_n) +
                          (min_n == max_n ? "" : "-" + std::to_string(max_n)) +
                          " comma-separated numbers");
  }
  return out;
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct KeySpec {
  std::string_view name;
  Setter set;
  Getter get;
  bool runtime_only = false;  // excluded from the fingerprint
};

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"bandwidth_hz", [](RunConfig& c, auto k, auto v) { c.chirp.bandwidth = to_double(k, v); },
       [](const RunConfig& c) { return fmt_double(c.chirp.bandwidth); }},
      {"chirp_duration_s",
       [](RunConfig& c, auto k, auto v) { c.chirp.duration = to_double(k, v); },
       [](const RunConfig& c) { return fmt_double(c.chirp.duration); }},
      {"n_samples", [](RunConfig& c, auto k, auto v) { c.chirp.n_samples = to_integer<int>(k, v); },
       [](const RunConfig& c) { return std::to_string(c.chirp.n_samples); }},
      {"carrier_hz", [](RunConfig& c, auto k, auto v) { c.chirp.carrier = to_double(k, v); },
       [](const RunConfig& c) { return fmt_double(c.chirp.carrier); }},
      {"window",
       [](RunConfig& c, auto k, auto v) {
         if (v == "rectangular") {
           c.chirp.window = Window::rectangular;
         } else if (v == "hann") {
           c.chirp.window = Window::hann;
         } else {
           throw ValidationError(std::string(k) + ": expected 'rectangular' or 'hann'");
         }
       },
       [](const RunConfig& c) {
         return std::string(c.chirp.window == Window::hann ? "hann" : "rectangular");
       }},
      {"zero_pad", [](RunConfig& c, auto k, auto v) { c.chirp.zero_pad = to_integer<int>(k, v); },
       [](const RunConfig& c) { return std::to_string(c.chirp.zero_pad); }},
      {"n_channels", [](RunConfig& c, auto k, auto v) { c.mimo.n_channels = to_integer<int>(k, v); },
       [](const RunConfig& c) { return std::to_string(c.mimo.n_channels); }},
      {"element_spacing_m",
       [](RunConfig& c, auto k, auto v) {
         if (v == "half-wavelength") {
           c.element_spacing_m.reset();
         } else {
           c.element_spacing_m = to_double(k, v);
         }
       },
       [](const RunConfig& c) {
         return c.element_spacing_m ? fmt_double(*c.element_spacing_m)
                                    : std::string("half-wavelength");
       }},
      {"mimo_position_m",
       [](RunConfig& c, auto k, auto v) {
         const auto xy = to_list(k, v, 1, 2);
         c.mimo.position = {xy[0], xy.size() > 1 ? xy[1] : 0.0};
       },
       [](const RunConfig& c) {
         return fmt_double(c.mimo.position.x) + ", " + fmt_double(c.mimo.position.y);
       }},
      {"nodes",
       [](RunConfig& c, auto k, auto v) {
         const auto ab = to_list(k, v, 2, 2);
         c.pair.a = ab[0];
         c.pair.b = ab[1];
       },
       [](const RunConfig& c) { return fmt_double(c.pair.a) + ", " + fmt_double(c.pair.b); }},
      {"fov_deg", [](RunConfig& c, auto k, auto v) { c.fov_deg = to_double(k, v); },
       [](const RunConfig& c) { return fmt_double(c.fov_deg); }},
      {"delta_r_m",
       [](RunConfig& c, auto k, auto v) {
         if (v == "auto") {
           c.delta_r_m.reset();
         } else {
           c.delta_r_m = to_double(k, v);
         }
       },
       [](const RunConfig& c) {
         return c.delta_r_m ? fmt_double(*c.delta_r_m) : std::string("auto");
       }},
      {"grid",
       [](RunConfig& c, auto k, auto v) {
         const auto g = to_list(k, v, 5, 5);
         c.grid = {g[0], g[1], g[2], g[3], g[4]};
       },
       [](const RunConfig& c) {
         const GridSpec& g = c.grid;
         return fmt_double(g.x_min) + ", " + fmt_double(g.x_max) + ", " + fmt_double(g.y_min) +
                ", " + fmt_double(g.y_max) + ", " + fmt_double(g.step);
       }},
      {"cfar_train", [](RunConfig& c, auto k, auto v) { c.cfar.n_train = to_integer<int>(k, v); },
       [](const RunConfig& c) { return std::to_string(c.cfar.n_train); }},
      {"cfar_guard", [](RunConfig& c, auto k, auto v) { c.cfar.n_guard = to_integer<int>(k, v); },
       [](const RunConfig& c) { return std::to_string(c.cfar.n_guard); }},
      {"cfar_pfa", [](RunConfig& c, auto k, auto v) { c.cfar.pfa = to_double(k, v); },
       [](const RunConfig& c) { return fmt_double(c.cfar.pfa); }},
      {"wall",
       [](RunConfig& c, auto k, auto v) {
         const auto w = to_list(k, v, 2, 2);
         c.placement.wall_lo = w[0];
         c.placement.wall_hi = w[1];
       },
       [](const RunConfig& c) {
         return fmt_double(c.placement.wall_lo) + ", " + fmt_double(c.placement.wall_hi);
       }},
      {"baseline_m",
       [](RunConfig& c, auto k, auto v) {
         const auto b = to_list(k, v, 2, 2);
         c.placement.min_baseline = b[0];
         c.placement.max_baseline = b[1];
       },
       [](const RunConfig& c) {
         return fmt_double(c.placement.min_baseline) + ", " +
                fmt_double(c.placement.max_baseline);
       }},
      {"search_step_m",
       [](RunConfig& c, auto k, auto v) { c.placement.search_step = to_double(k, v); },
       [](const RunConfig& c) { return fmt_double(c.placement.search_step); }},
      {"eval_step_m", [](RunConfig& c, auto k, auto v) { c.placement.eval_step = to_double(k, v); },
       [](const RunConfig& c) { return fmt_double(c.placement.eval_step); }},
      {"objective",
       [](RunConfig& c, auto k, auto v) {
         if (v == "mean_error") {
           c.placement.objective = PlacementObjective::mean_error;
         } else if (v == "max_error") {
           c.placement.objective = PlacementObjective::max_error;
         } else {
           throw ValidationError(std::string(k) + ": expected 'mean_error' or 'max_error'");
         }
       },
       [](const RunConfig& c) {
         return std::string(c.placement.objective == PlacementObjective::max_error ? "max_error"
                                                                                   : "mean_error");
       }},
      {"target",
       [](RunConfig& c, auto k, auto v) {
         const auto xy = to_list(k, v, 2, 2);
         c.target = {xy[0], xy[1]};
       },
       [](const RunConfig& c) { return fmt_double(c.target.x) + ", " + fmt_double(c.target.y); }},
      {"snr_db",
       [](RunConfig& c, auto k, auto v) {
         if (v == "none") {
           c.snr_db.reset();
         } else {
           c.snr_db = to_double(k, v);
         }
       },
       [](const RunConfig& c) { return c.snr_db ? fmt_double(*c.snr_db) : std::string("none"); }},
      {"trials", [](RunConfig& c, auto k, auto v) { c.trials = to_integer<std::size_t>(k, v); },
       [](const RunConfig& c) { return std::to_string(c.trials); }},
      {"seed", [](RunConfig& c, auto k, auto v) { c.seed = to_integer<std::uint64_t>(k, v); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"output_dir", [](RunConfig& c, auto, auto v) { c.output_dir = std::string(v); },
       [](const RunConfig& c) { return c.output_dir; }, true},
      {"threads", [](RunConfig& c, auto k, auto v) { c.threads = to_integer<unsigned>(k, v); },
       [](const RunConfig& c) { return std::to_string(c.threads); }, true},
  };
  return table;
}

const KeySpec& find_key(std::string_view key) {
  for (const auto& spec : key_table()) {
    if (spec.name == key) return spec;
  }
  throw UnknownKey("unknown configuration key '" + std::string(key) + "'");
}

std::string render(const RunConfig& cfg, bool include_runtime) {
  std::string out;
  for (const auto& spec : key_table()) {
    if (spec.runtime_only && !include_runtime) continue;
    out += spec.name;
    out += " = ";
    out += spec.get(cfg);
    out += '\n';
  }
  return out;
}

}  // namespace

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys = [] {
    std::vector<std::string_view> k;
    for (const auto& spec : key_table()) k.push_back(spec.name);
    return k;
  }();
  return keys;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  find_key(trim(key)).set(cfg, trim(key), trim(value));
}

void finalize_config(RunConfig& cfg) {
  cfg.chirp.validate();
  if (!(cfg.fov_deg > 0.0 && cfg.fov_deg <= 180.0)) {
    throw ValidationError("fov_deg must lie in (0, 180]");
  }
  const double fov = cfg.fov_deg * std::numbers::pi / 180.0;

  cfg.mimo.wavelength = kSpeedOfLight / cfg.chirp.carrier;
  cfg.mimo.element_spacing = cfg.element_spacing_m.value_or(0.5 * cfg.mimo.wavelength);
  cfg.mimo.fov = fov;
  cfg.mimo.validate();

  cfg.pair.fov = fov;
  cfg.pair.delta_r = cfg.delta_r_m.value_or(range_resolution(cfg.chirp.bandwidth));
  cfg.pair.validate();

  cfg.grid.validate();
  cfg.cfar.validate();

  cfg.placement.grid = cfg.grid;
  cfg.placement.fov = fov;
  cfg.placement.delta_r = cfg.pair.delta_r;
  cfg.placement.validate();

  if (!std::isfinite(cfg.target.x) || !(cfg.target.y > 0.0)) {
    throw ValidationError("target must have y > 0");
  }
  if (cfg.trials < 100) throw ValidationError("trials must be at least 100");
  if (cfg.output_dir.empty()) throw ValidationError("output_dir must not be empty");
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "missing key");
    if (value.empty()) throw ParseError(line_no, "missing value for '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) {
      throw ParseError(line_no, "duplicate key '" + std::string(key) + "'");
    }
    try {
      apply_setting(cfg, key, value);
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  finalize_config(cfg);
  return cfg;
}

std::string canonical_form(const RunConfig& cfg) { return render(cfg, true); }

std::string config_fingerprint(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : render(cfg, false)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace radarloc
