// mtnpass: saddle search runs, contour grids and verification suites.
#include "mtnpass/mtnpass.h"
#include "run_config.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using mtnpass_cli::ConfigError;
using mtnpass_cli::RunConfig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSolver = 1;
constexpr int kExitUsage = 2;

enum class LogLevel { Quiet, Info, Debug };
LogLevel g_log = LogLevel::Info;

LogLevel log_level_from_env() {
  const char* env = std::getenv("MTNPASS_LOG");
  if (env == nullptr || *env == '\0') return LogLevel::Info;
  const std::string s(env);
  if (s == "quiet") return LogLevel::Quiet;
  if (s == "info") return LogLevel::Info;
  if (s == "debug") return LogLevel::Debug;
  throw ConfigError("MTNPASS_LOG must be quiet, info or debug (got '" + s + "')");
}

void info(const std::string& msg) {
  if (g_log != LogLevel::Quiet) std::cerr << msg << "\n";
}

void debug(const std::string& msg) {
  if (g_log == LogLevel::Debug) std::cerr << msg << "\n";
}

// Usage or configuration failure (exit 2) vs. a failure inside the run (exit 1).
struct RunFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct ObjectiveDeleter {
  void operator()(mtnp_objective* p) const { mtnp_objective_free(p); }
};
struct ReportDeleter {
  void operator()(mtnp_report* p) const { mtnp_report_free(p); }
};
using ObjectivePtr = std::unique_ptr<mtnp_objective, ObjectiveDeleter>;
using ReportPtr = std::unique_ptr<mtnp_report, ReportDeleter>;

std::string take_string(char* s) {
  std::string out(s);
  mtnp_string_free(s);
  return out;
}

[[noreturn]] void fail_config(mtnp_status st) {
  throw ConfigError(std::string(mtnp_status_string(st)) + ": " + mtnp_last_error());
}

struct CommonOptions {
  std::string config_path;
  std::string function;
  std::string model;
  std::string a;
  std::string b;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "RunConfig JSON file");
  cmd->add_option("--function", o.function, "builtin name (six_hump_camel, tightness2d) or quadratic");
  cmd->add_option("--model", o.model, "quadratic model JSON file or inline JSON {\"H\",\"g\",\"c\"}");
  cmd->add_option("--a", o.a, "first endpoint, comma-separated");
  cmd->add_option("--b", o.b, "second endpoint, comma-separated");
}

RunConfig load_config(const CommonOptions& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) {
    json j;
    try {
      j = json::parse(mtnpass_cli::read_file(o.config_path));
    } catch (const json::parse_error& e) {
      throw ConfigError("malformed config '" + o.config_path + "': " + e.what());
    }
    cfg = mtnpass_cli::parse_run_config(j);
  }
  if (!o.function.empty()) {
    cfg.function.name = o.function;
    if (o.function != "quadratic") cfg.function.model.reset();
  }
  if (!o.model.empty()) {
    const std::string text = o.model.front() == '{' ? o.model : mtnpass_cli::read_file(o.model);
    try {
      cfg.function.model = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("malformed model: ") + e.what());
    }
    if (cfg.function.name.empty()) cfg.function.name = "quadratic";
  }
  if (!o.a.empty()) cfg.a = mtnpass_cli::parse_reals(o.a);
  if (!o.b.empty()) cfg.b = mtnpass_cli::parse_reals(o.b);
  return cfg;
}

ObjectivePtr make_objective(const RunConfig& cfg) {
  mtnp_objective* raw = nullptr;
  mtnp_status st;
  if (cfg.function.name.empty()) throw ConfigError("no function given (--function)");
  if (cfg.function.name == "quadratic") {
    if (!cfg.function.model) throw ConfigError("function 'quadratic' needs --model");
    st = mtnp_objective_quadratic_json(cfg.function.model->dump().c_str(), &raw);
  } else {
    if (cfg.function.model) throw ConfigError("--model is only valid with function 'quadratic'");
    st = mtnp_objective_builtin(cfg.function.name.c_str(), &raw);
  }
  if (st != MTNP_OK) fail_config(st);
  return ObjectivePtr(raw);
}

ReportPtr run_solve(const mtnp_objective* obj, const RunConfig& cfg) {
  const auto n = static_cast<std::size_t>(mtnp_objective_dimension(obj));
  if (cfg.a.size() != n || cfg.b.size() != n)
    throw ConfigError("endpoints --a and --b need " + std::to_string(n) + " coordinates each");
  mtnp_report* raw = nullptr;
  const mtnp_status st = mtnp_solve(obj, cfg.a.data(), cfg.b.data(), &cfg.solver, &raw);
  if (st == MTNP_E_BAD_ENDPOINTS || st == MTNP_E_INVALID_ARGUMENT) fail_config(st);
  if (st != MTNP_OK) throw RunFailure(std::string(mtnp_status_string(st)) + ": " + mtnp_last_error());
  return ReportPtr(raw);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

int cmd_solve(const CommonOptions& common, CLI::App* cmd, const RunConfig& overrides_from_flags,
              const std::string& out_dir, bool trace) {
  RunConfig cfg = load_config(common);
  const mtnp_solve_config& f = overrides_from_flags.solver;
  if (cmd->count("--gtol")) cfg.solver.gtol = f.gtol;
  if (cmd->count("--xtol")) cfg.solver.xtol = f.xtol;
  if (cmd->count("--max-iter")) cfg.solver.max_iter = f.max_iter;
  if (cmd->count("--radius")) cfg.solver.radius = f.radius;
  if (cmd->count("--seed")) cfg.solver.seed = f.seed;
  if (cmd->count("--out")) cfg.out_dir = out_dir;
  if (trace) cfg.trace = true;

  const ObjectivePtr obj = make_objective(cfg);
  const ReportPtr report = run_solve(obj.get(), cfg);

  char* raw = nullptr;
  if (mtnp_report_json(report.get(), &raw) != MTNP_OK) throw RunFailure(mtnp_last_error());
  json rj = json::parse(take_string(raw));
  rj["function"] = cfg.function.name;
  rj["config"] = mtnpass_cli::to_json(cfg)["solver"];
  if (mtnp_report_trace_json(report.get(), &raw) != MTNP_OK) throw RunFailure(mtnp_last_error());
  const std::string trace_text = take_string(raw);

  const fs::path dir(cfg.out_dir);
  write_text(dir / "report.json", rj.dump(2) + "\n");
  write_text(dir / "trace.json", trace_text + "\n");

  const std::size_t n_records = mtnp_report_trace_size(report.get());
  const int dim = mtnp_report_dimension(report.get());
  for (std::size_t i = 0; i < n_records; ++i) {
    mtnp_trace_record r;
    mtnp_report_trace_record(report.get(), i, &r);
    std::string line = std::to_string(r.iteration) + " " + r.kind + " l=" + fmt(r.level) + " g=" + fmt(r.g) +
                       " gap=" + fmt(r.gap) + " x=";
    for (int k = 0; k < dim; ++k) line += (k ? "," : "") + fmt(r.x[k]);
    if (cfg.trace) {
      std::cerr << line << "\n";
    } else {
      debug(line);
    }
  }

  const mtnp_outcome outcome = mtnp_report_outcome(report.get());
  info(std::string(mtnp_outcome_string(outcome)) + " after " + std::to_string(mtnp_report_iterations(report.get())) +
       " iterations: f=" + fmt(mtnp_report_value(report.get())) + " |grad f|=" +
       fmt(mtnp_report_grad_norm(report.get())) + " morse=" + std::to_string(mtnp_report_morse_index(report.get())));
  return outcome == MTNP_SADDLE_FOUND ? kExitOk : kExitSolver;
}

int cmd_contour(const CommonOptions& common, CLI::App* cmd, const std::string& bounds, int resolution,
                const std::string& out_csv, const std::string& trace_csv) {
  RunConfig cfg = load_config(common);
  if (cmd->count("--bounds")) cfg.grid.bounds = mtnpass_cli::parse_reals(bounds);
  if (cmd->count("--resolution")) cfg.grid.resolution = resolution;
  mtnpass_cli::validate_grid(cfg.grid);

  const ObjectivePtr obj = make_objective(cfg);
  if (mtnp_objective_dimension(obj.get()) != 2) throw ConfigError("contour needs a 2-dimensional function");

  const int res = cfg.grid.resolution;
  const auto& bd = cfg.grid.bounds;
  std::string csv = "x1,x2,f\n";
  for (int i = 0; i < res; ++i) {
    const double x2 = bd[2] + (bd[3] - bd[2]) * i / (res - 1);
    for (int j = 0; j < res; ++j) {
      const double x[2] = {bd[0] + (bd[1] - bd[0]) * j / (res - 1), x2};
      double f = 0.0;
      if (mtnp_objective_value(obj.get(), x, &f) != MTNP_OK) throw RunFailure(mtnp_last_error());
      csv += fmt(x[0]) + "," + fmt(x[1]) + "," + fmt(f) + "\n";
    }
  }
  write_text(out_csv, csv);
  info("wrote " + std::to_string(res * res) + " grid rows to " + out_csv);

  if (trace_csv.empty()) return kExitOk;
  const ReportPtr report = run_solve(obj.get(), cfg);
  std::string poly = "iter,kind,x1,x2,l,g\n";
  const std::size_t n_records = mtnp_report_trace_size(report.get());
  for (std::size_t k = 0; k < n_records; ++k) {
    mtnp_trace_record r;
    mtnp_report_trace_record(report.get(), k, &r);
    poly += std::to_string(r.iteration) + "," + r.kind + "," + fmt(r.x[0]) + "," + fmt(r.x[1]) + "," + fmt(r.level) +
            "," + fmt(r.g) + "\n";
  }
  write_text(trace_csv, poly);
  info("wrote " + std::to_string(n_records) + " iterates to " + trace_csv);
  return mtnp_report_outcome(report.get()) == MTNP_SADDLE_FOUND ? kExitOk : kExitSolver;
}

int cmd_verify(const std::string& suite, const std::string& function, std::uint64_t seed, const std::string& out) {
  static const std::vector<std::string> suites{"grad-formulas", "hessian-stability", "convexity", "quadratic-oracle"};
  if (std::find(suites.begin(), suites.end(), suite) == suites.end())
    throw ConfigError("unknown suite '" + suite + "'");
  char* raw = nullptr;
  int failures = 0;
  const mtnp_status st = mtnp_verify(suite.c_str(), function.c_str(), seed, &raw, &failures);
  if (st == MTNP_E_UNKNOWN_FUNCTION || st == MTNP_E_INVALID_ARGUMENT) fail_config(st);
  if (st != MTNP_OK) throw RunFailure(std::string(mtnp_status_string(st)) + ": " + mtnp_last_error());
  const std::string text = take_string(raw) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text(out, text);
  }
  info(suite + ": " + std::to_string(failures) + " failure(s)");
  return failures == 0 ? kExitOk : kExitSolver;
}

int cmd_config(const CommonOptions& common) {
  std::cout << mtnpass_cli::to_json(load_config(common)).dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mtnpass: mountain pass saddle search"};
  app.require_subcommand(1);

  CommonOptions solve_opts;
  RunConfig flag_values;
  std::string out_dir;
  bool trace = false;
  auto* solve = app.add_subcommand("solve", "find a Morse-1 saddle between two endpoints");
  add_common(solve, solve_opts);
  solve->add_option("--gtol", flag_values.solver.gtol, "gradient tolerance");
  solve->add_option("--xtol", flag_values.solver.xtol, "segment length tolerance");
  solve->add_option("--max-iter", flag_values.solver.max_iter, "iteration limit");
  solve->add_option("--radius", flag_values.solver.radius, "trust region radius");
  solve->add_option("--seed", flag_values.solver.seed, "random seed");
  solve->add_option("--out", out_dir, "output directory for report.json and trace.json");
  solve->add_flag("--trace", trace, "print every iterate to stderr");

  CommonOptions contour_opts;
  std::string bounds;
  int resolution = 0;
  std::string out_csv = "contour.csv";
  std::string trace_csv;
  auto* contour = app.add_subcommand("contour", "write a function grid as CSV (x1,x2,f)");
  add_common(contour, contour_opts);
  contour->add_option("--bounds", bounds, "x1lo,x1hi,x2lo,x2hi");
  contour->add_option("--resolution", resolution, "points per axis (>= 2)");
  contour->add_option("--out", out_csv, "grid CSV path");
  contour->add_option("--trace", trace_csv, "also solve from --a/--b and write the iterate polyline CSV here");

  std::string suite;
  std::string verify_function;
  std::uint64_t verify_seed = 0;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "grad-formulas | hessian-stability | convexity | quadratic-oracle")->required();
  verify->add_option("--function", verify_function, "restrict to one function");
  verify->add_option("--seed", verify_seed, "random seed");
  verify->add_option("--out", verify_out, "write the JSON report here instead of stdout");

  CommonOptions config_opts;
  auto* config = app.add_subcommand("config", "print the normalized RunConfig");
  add_common(config, config_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    g_log = log_level_from_env();
    if (*solve) return cmd_solve(solve_opts, solve, flag_values, out_dir, trace);
    if (*contour) return cmd_contour(contour_opts, contour, bounds, resolution, out_csv, trace_csv);
    if (*verify) return cmd_verify(suite, verify_function, verify_seed, verify_out);
    if (*config) return cmd_config(config_opts);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RunFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitUsage;
}
