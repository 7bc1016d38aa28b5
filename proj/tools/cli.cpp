#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "radarloc/radarloc.hpp"

namespace radarloc::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> settings;  // key=value
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  // simulate
  std::optional<std::string> target;
  std::optional<std::string> snr_db;
  std::optional<std::size_t> trials;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunConfig load_config(const Options& opt) {
  RunConfig cfg = opt.config_path.empty() ? parse_config("") : parse_config(read_file(opt.config_path));
  for (const std::string& kv : opt.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + kv + "'");
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (opt.output_dir) apply_setting(cfg, "output_dir", *opt.output_dir);
  if (opt.seed) apply_setting(cfg, "seed", std::to_string(*opt.seed));
  if (opt.threads) apply_setting(cfg, "threads", std::to_string(*opt.threads));
  if (opt.target) apply_setting(cfg, "target", *opt.target);
  if (opt.snr_db) apply_setting(cfg, "snr_db", *opt.snr_db);
  if (opt.trials) apply_setting(cfg, "trials", std::to_string(*opt.trials));
  finalize_config(cfg);
  return cfg;
}

std::string num(double v, int precision = 6) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

/// Left-aligned first column, right-aligned rest.
class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string str() const {
    std::vector<std::size_t> width;
    for (const auto& row : rows_) {
      width.resize(std::max(width.size(), row.size()), 0);
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream os;
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c == 0) {
          os << std::left << std::setw(static_cast<int>(width[c])) << row[c];
        } else {
          os << "  " << std::right << std::setw(static_cast<int>(width[c])) << row[c];
        }
      }
      os << '\n';
    }
    return os.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

class Run {
 public:
  Run(RunConfig cfg, std::ostream& out) : cfg_(std::move(cfg)), out_(out) {
    fingerprint_ = config_fingerprint(cfg_);
    std::error_code ec;
    fs::create_directories(cfg_.output_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg_.output_dir + "': " + ec.message());
  }

  const RunConfig& cfg() const { return cfg_; }
  Parallelism par() const { return {cfg_.threads}; }

  void emit_field(const ScalarField& field, const std::string& metric, const std::string& units) {
    const FieldFileHeader header{metric, units, field.grid, fingerprint_};
    write_field_csv(field, header, fs::path(cfg_.output_dir) / (metric + ".csv"));
    write_field_pgm(field, fs::path(cfg_.output_dir) / (metric + ".pgm"),
                    "metric: " + metric + " fingerprint: " + fingerprint_);
  }

  void finish(const std::string& title, const Table& table) {
    const std::string text =
        "# " + title + "\n# fingerprint: " + fingerprint_ + "\n" + table.str();
    write_text_file(fs::path(cfg_.output_dir) / "summary.txt", text);
    out_ << text;
  }

 private:
  RunConfig cfg_;
  std::ostream& out_;
  std::string fingerprint_;
};

Table field_table() { return Table({"metric", "units", "max", "mean", "cells", "dominance"}); }

void add_field_row(Table& t, const std::string& metric, const std::string& units,
                   const FieldStats& s, std::optional<double> dominance = std::nullopt) {
  t.add({metric, units, num(s.max), num(s.mean), std::to_string(s.count),
         dominance ? num(*dominance, 4) : std::string("-")});
}

void cmd_map_mimo(Run& run) {
  const auto field = mimo_error_map(run.cfg().mimo, run.cfg().grid, run.par());
  run.emit_field(field, "mimo_error", "m");
  Table t = field_table();
  add_field_row(t, "mimo_error", "m", field_stats(field));
  run.finish("map-mimo", t);
}

void cmd_map_multisite(Run& run) {
  const auto field = multisite_error_map(run.cfg().pair, run.cfg().grid, run.par());
  run.emit_field(field, "multisite_error", "m");
  Table t = field_table();
  add_field_row(t, "multisite_error", "m", field_stats(field));
  run.finish("map-multisite", t);
}

void cmd_resolution_map(Run& run) {
  const auto mimo = mimo_resolution_map(run.cfg().mimo, run.cfg().grid, run.par());
  const auto multi = multisite_resolution_map(run.cfg().pair, run.cfg().grid, run.par());
  run.emit_field(mimo, "mimo_resolution", "rad");
  run.emit_field(multi, "multisite_resolution", "rad");
  Table t = field_table();
  add_field_row(t, "mimo_resolution", "rad", field_stats(mimo));
  add_field_row(t, "multisite_resolution", "rad", field_stats(multi),
                dominance_fraction(multi, mimo));
  run.finish("resolution-map", t);
}

void cmd_compare(Run& run) {
  const auto& cfg = run.cfg();
  const auto mimo_err = mimo_error_map(cfg.mimo, cfg.grid, run.par());
  const auto multi_err = multisite_error_map(cfg.pair, cfg.grid, run.par());
  const auto mimo_res = mimo_resolution_map(cfg.mimo, cfg.grid, run.par());
  const auto multi_res = multisite_resolution_map(cfg.pair, cfg.grid, run.par());
  run.emit_field(mimo_err, "mimo_error", "m");
  run.emit_field(multi_err, "multisite_error", "m");

  Table t = field_table();
  add_field_row(t, "mimo_error", "m", field_stats(mimo_err));
  add_field_row(t, "multisite_error", "m", field_stats(multi_err),
                dominance_fraction(multi_err, mimo_err));
  add_field_row(t, "mimo_resolution", "rad", field_stats(mimo_res));
  add_field_row(t, "multisite_resolution", "rad", field_stats(multi_res),
                dominance_fraction(multi_res, mimo_res));
  run.finish("compare", t);
}

void cmd_simulate(Run& run) {
  const auto& cfg = run.cfg();
  const MonteCarloReport rep = monte_carlo_localize(cfg.pair, cfg.chirp, cfg.cfar, cfg.target,
                                                    cfg.snr_db, cfg.trials, cfg.seed, run.par());
  std::string csv = "trial_index,error_m\n";
  for (std::size_t k = 0; k < rep.errors_m.size(); ++k) {
    csv += std::to_string(k) + "," + num(rep.errors_m[k], 9) + "\n";
  }
  write_text_file(fs::path(cfg.output_dir) / "montecarlo.csv", csv);

  Table t({"target_x_m", "target_y_m", "snr_db", "trials", "failures", "p95_m", "mean_m",
           "analytic_margin_m", "p95_over_margin"});
  t.add({num(rep.target.x, 3), num(rep.target.y, 3), cfg.snr_db ? num(*cfg.snr_db, 1) : "none",
         std::to_string(rep.trials), std::to_string(rep.failures), num(rep.p95_m),
         num(rep.mean_m), num(rep.analytic_margin_m), num(rep.p95_m / rep.analytic_margin_m, 4)});
  run.finish("simulate", t);
}

void cmd_optimize(Run& run) {
  const PlacementProblem& problem = run.cfg().placement;
  const PlacementResult res = optimize_placement(problem, run.par());
  const SisoPairConfig pair{res.a, res.b, problem.fov, problem.delta_r};
  run.emit_field(multisite_error_map(pair, problem.grid, run.par()), "optimized_multisite_error",
                 "m");
  Table t({"a_m", "b_m", "objective", "search_value", "refined_value", "candidates", "skipped"});
  t.add({num(res.a, 4), num(res.b, 4),
         problem.objective == PlacementObjective::mean_error ? "mean_error" : "max_error",
         num(res.objective_value), num(res.refined_objective_value), std::to_string(res.evaluated),
         std::to_string(res.skipped)});
  run.finish("optimize", t);
}

int fail(std::ostream& err, int code, const std::string& kind, const std::string& what) {
  err << "error: " << kind << ": " << what << '\n';
  return code;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Localization error analysis for monostatic MIMO and two-node SISO radar",
               "radarloc"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Options opt;
  app.add_option("-c,--config", opt.config_path, "key = value configuration file");
  app.add_option("--set", opt.settings, "override a configuration key (key=value), repeatable");
  app.add_option("-o,--output-dir", opt.output_dir, "directory for CSV/PGM/summary output");
  app.add_option("--seed", opt.seed, "random seed");
  app.add_option("--threads", opt.threads, "worker threads (0 = all cores)");

  using Handler = std::function<void(Run&)>;
  const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
      {"map-mimo", "MIMO localization error map", cmd_map_mimo},
      {"map-multisite", "multi-site localization error map", cmd_map_multisite},
      {"resolution-map", "angular and equivalent angular resolution maps", cmd_resolution_map},
      {"compare", "MIMO versus multi-site error maps and statistics", cmd_compare},
      {"simulate", "Monte-Carlo end-to-end localization at one target", cmd_simulate},
      {"optimize", "exhaustive node placement search", cmd_optimize},
  };
  std::map<CLI::App*, Handler> handlers;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (name == "simulate") {
      sub->add_option("--target", opt.target, "target position x,y in metres");
      sub->add_option("--snr-db", opt.snr_db, "per-target SNR in dB, or 'none'");
      sub->add_option("--trials", opt.trials, "number of Monte-Carlo trials");
    }
    handlers[sub] = fn;
  }

  std::vector<const char*> argv{"radarloc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << app.help();
    return fail(err, kConfigError, "UsageError", e.what());
  }

  try {
    Run run(load_config(opt), out);
    for (CLI::App* sub : app.get_subcommands()) handlers.at(sub)(run);
    return kOk;
  } catch (const Error& e) {
    const int code = e.category() == ErrorCategory::configuration ? kConfigError
                     : e.category() == ErrorCategory::io          ? kIoError
                                                                  : kInfeasible;
    return fail(err, code, e.kind(), e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(err, kIoError, "IoError", e.what());
  }
}

}  // namespace radarloc::cli
