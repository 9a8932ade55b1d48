#pragma once

#include "mtnpass/mtnpass.h"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtnpass_cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  std::vector<double> bounds{-2.0, 2.0, -2.0, 2.0};  // x1 lo, x1 hi, x2 lo, x2 hi
  int resolution = 101;
};

// Either a builtin name or an inline quadratic model {"H","g","c"}.
struct FunctionSpec {
  std::string name;
  std::optional<nlohmann::json> model;
};

struct RunConfig {
  FunctionSpec function;
  std::vector<double> a;
  std::vector<double> b;
  mtnp_solve_config solver{};
  std::string out_dir = ".";
  bool trace = false;
  GridSpec grid;

  RunConfig();
};

// Throws ConfigError on unknown keys, wrong types or bad values.
RunConfig parse_run_config(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);

std::vector<double> parse_reals(const std::string& text);
std::string read_file(const std::string& path);
void validate_grid(const GridSpec& grid);

}  // namespace mtnpass_cli
