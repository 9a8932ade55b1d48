#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mtnpass_cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("'" + key + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError("'" + key + "' must be finite");
  return v;
}

std::vector<double> reals(const json& j, const std::string& key) {
  if (!j.is_array()) throw ConfigError("'" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : j) out.push_back(number(e, key));
  return out;
}

void parse_solver(const json& j, mtnp_solve_config& s) {
  reject_unknown(j, {"gtol", "xtol", "hull_tol", "eta", "max_iter", "radius", "newton_handoff_gap", "root_tol",
                     "denom_tol", "seed", "level_policy"},
                 "solver");
  auto set = [&](const char* key, double& field) {
    if (j.contains(key)) field = number(j.at(key), key);
  };
  set("gtol", s.gtol);
  set("xtol", s.xtol);
  set("hull_tol", s.hull_tol);
  set("eta", s.eta);
  set("radius", s.radius);
  set("newton_handoff_gap", s.newton_handoff_gap);
  set("root_tol", s.root_tol);
  set("denom_tol", s.denom_tol);
  if (j.contains("max_iter")) {
    if (!j.at("max_iter").is_number_integer()) throw ConfigError("'max_iter' must be an integer");
    s.max_iter = j.at("max_iter").get<int>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("level_policy")) {
    const auto& p = j.at("level_policy");
    if (p == "midpoint") {
      s.level_policy = MTNP_LEVEL_MIDPOINT;
    } else if (p == "quadratic_estimate") {
      s.level_policy = MTNP_LEVEL_QUADRATIC_ESTIMATE;
    } else {
      throw ConfigError("'level_policy' must be \"midpoint\" or \"quadratic_estimate\"");
    }
  }
}

}  // namespace

RunConfig::RunConfig() { mtnp_solve_config_default(&solver); }

RunConfig parse_run_config(const json& j) {
  reject_unknown(j, {"function", "a", "b", "solver", "output", "grid"}, "config");
  RunConfig c;
  if (j.contains("function")) {
    const auto& f = j.at("function");
    if (f.is_string()) {
      c.function.name = f.get<std::string>();
    } else if (f.is_object()) {
      reject_unknown(f, {"quadratic"}, "function");
      if (!f.contains("quadratic")) throw ConfigError("function object needs a 'quadratic' model");
      c.function.name = "quadratic";
      c.function.model = f.at("quadratic");
    } else {
      throw ConfigError("'function' must be a name or {\"quadratic\": model}");
    }
  }
  if (j.contains("a")) c.a = reals(j.at("a"), "a");
  if (j.contains("b")) c.b = reals(j.at("b"), "b");
  if (j.contains("solver")) parse_solver(j.at("solver"), c.solver);
  if (j.contains("output")) {
    const auto& o = j.at("output");
    reject_unknown(o, {"dir", "trace"}, "output");
    if (o.contains("dir")) {
      if (!o.at("dir").is_string()) throw ConfigError("'dir' must be a string");
      c.out_dir = o.at("dir").get<std::string>();
    }
    if (o.contains("trace")) {
      if (!o.at("trace").is_boolean()) throw ConfigError("'trace' must be a boolean");
      c.trace = o.at("trace").get<bool>();
    }
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    reject_unknown(g, {"bounds", "resolution"}, "grid");
    if (g.contains("bounds")) c.grid.bounds = reals(g.at("bounds"), "bounds");
    if (g.contains("resolution")) {
      if (!g.at("resolution").is_number_integer()) throw ConfigError("'resolution' must be an integer");
      c.grid.resolution = g.at("resolution").get<int>();
    }
    validate_grid(c.grid);
  }
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  if (c.function.model) {
    j["function"] = json{{"quadratic", *c.function.model}};
  } else {
    j["function"] = c.function.name;
  }
  j["a"] = c.a;
  j["b"] = c.b;
  const auto& s = c.solver;
  j["solver"] = json{{"gtol", s.gtol},
                     {"xtol", s.xtol},
                     {"hull_tol", s.hull_tol},
                     {"eta", s.eta},
                     {"max_iter", s.max_iter},
                     {"radius", s.radius},
                     {"newton_handoff_gap", s.newton_handoff_gap},
                     {"root_tol", s.root_tol},
                     {"denom_tol", s.denom_tol},
                     {"seed", s.seed},
                     {"level_policy", s.level_policy == MTNP_LEVEL_MIDPOINT ? "midpoint" : "quadratic_estimate"}};
  j["output"] = json{{"dir", c.out_dir}, {"trace", c.trace}};
  j["grid"] = json{{"bounds", c.grid.bounds}, {"resolution", c.grid.resolution}};
  return j;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + item + "' in '" + text + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size() || !std::isfinite(v)) throw ConfigError("bad number '" + item + "' in '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("expected comma-separated reals, got '" + text + "'");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void validate_grid(const GridSpec& grid) {
  if (grid.bounds.size() != 4) throw ConfigError("grid bounds need 4 values: x1lo,x1hi,x2lo,x2hi");
  if (!(grid.bounds[0] < grid.bounds[1]) || !(grid.bounds[2] < grid.bounds[3]))
    throw ConfigError("grid bounds must satisfy lo < hi");
  if (grid.resolution < 2) throw ConfigError("grid resolution must be at least 2");
}

}  // namespace mtnpass_cli
