#pragma once

#include "mtnpass/driver.hpp"
#include "mtnpass/verify.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace mtnpass {

nlohmann::json to_json(const Vec& v);
nlohmann::json to_json(const TraceRecord& r);
nlohmann::json trace_to_json(const std::vector<TraceRecord>& trace);
/// Report without the trace (the trace is written separately).
nlohmann::json to_json(const SolveReport& report);

nlohmann::json to_json(const GradCheckReport& report);
nlohmann::json to_json(const StabilityReport& report);
nlohmann::json to_json(const ConvexityReport& report);

struct SuiteResult {
  int failures = 0;
  nlohmann::json report;
};

/// Runs a named verification suite: "grad-formulas", "hessian-stability",
/// "convexity" or "quadratic-oracle". An empty function name selects the
/// suite's default set of builtins. Throws UnknownFunction / InvalidArgument.
SuiteResult run_verify_suite(const std::string& suite, const std::string& function, std::uint64_t seed);

}  // namespace mtnpass
