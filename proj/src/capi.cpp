#include "mtnpass/mtnpass.h"

#include "mtnpass/driver.hpp"
#include "mtnpass/objective.hpp"
#include "mtnpass/quadmodel.hpp"
#include "mtnpass/reports.hpp"

#include <cstring>
#include <exception>
#include <new>
#include <string>

struct mtnp_objective {
  mtnpass::Objective obj;
};

struct mtnp_report {
  mtnpass::SolveReport report;
};

namespace {

thread_local std::string last_error;

mtnp_status status_of(mtnpass::ErrorCode code) {
  using mtnpass::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return MTNP_E_INVALID_ARGUMENT;
    case ErrorCode::UnknownFunction: return MTNP_E_UNKNOWN_FUNCTION;
    case ErrorCode::ParseError: return MTNP_E_PARSE;
    case ErrorCode::EvaluationError: return MTNP_E_EVALUATION;
    case ErrorCode::NoLineMax: return MTNP_E_NO_LINE_MAX;
    case ErrorCode::CrossingOutsideRegion: return MTNP_E_CROSSING_OUTSIDE_REGION;
    case ErrorCode::BadDirection: return MTNP_E_BAD_DIRECTION;
    case ErrorCode::DegenerateDenominator: return MTNP_E_DEGENERATE_DENOMINATOR;
    case ErrorCode::NotConcaveAlongV: return MTNP_E_NOT_CONCAVE_ALONG_V;
    case ErrorCode::NoEstimate: return MTNP_E_NO_ESTIMATE;
    case ErrorCode::NonSymmetric: return MTNP_E_NON_SYMMETRIC;
    case ErrorCode::SingularMatrix: return MTNP_E_SINGULAR_MATRIX;
    case ErrorCode::NewtonBreakdown: return MTNP_E_NEWTON_BREAKDOWN;
    case ErrorCode::AvStalled: return MTNP_E_AV_STALLED;
    case ErrorCode::CriticalCandidate: return MTNP_E_CRITICAL_CANDIDATE;
    case ErrorCode::LUpImpossible: return MTNP_E_L_UP_IMPOSSIBLE;
    case ErrorCode::BadEndpoints: return MTNP_E_BAD_ENDPOINTS;
  }
  return MTNP_E_INTERNAL;
}

template <class F>
mtnp_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return MTNP_OK;
  } catch (const mtnpass::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = std::string("ParseError: ") + e.what();
    return MTNP_E_PARSE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MTNP_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MTNP_E_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw mtnpass::Error(mtnpass::ErrorCode::InvalidArgument, what);
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

mtnpass::SolveConfig to_config(const mtnp_solve_config& c) {
  mtnpass::SolveConfig out;
  out.gtol = c.gtol;
  out.xtol = c.xtol;
  out.hull_tol = c.hull_tol;
  out.eta = c.eta;
  out.max_iter = c.max_iter;
  out.radius = c.radius;
  out.newton_handoff_gap = c.newton_handoff_gap;
  out.root_tol = c.root_tol;
  out.denom_tol = c.denom_tol;
  out.seed = c.seed;
  out.level_policy = c.level_policy == MTNP_LEVEL_QUADRATIC_ESTIMATE ? mtnpass::LevelPolicy::QuadraticEstimate
                                                                     : mtnpass::LevelPolicy::Midpoint;
  return out;
}

}  // namespace

extern "C" {

const char* mtnp_status_string(mtnp_status status) {
  switch (status) {
    case MTNP_OK: return "ok";
    case MTNP_E_INVALID_ARGUMENT: return "invalid argument";
    case MTNP_E_UNKNOWN_FUNCTION: return "unknown function";
    case MTNP_E_PARSE: return "parse error";
    case MTNP_E_EVALUATION: return "evaluation error";
    case MTNP_E_NO_LINE_MAX: return "no line maximum";
    case MTNP_E_CROSSING_OUTSIDE_REGION: return "crossing outside region";
    case MTNP_E_BAD_DIRECTION: return "bad direction";
    case MTNP_E_DEGENERATE_DENOMINATOR: return "degenerate denominator";
    case MTNP_E_NOT_CONCAVE_ALONG_V: return "not concave along v";
    case MTNP_E_NO_ESTIMATE: return "no estimate";
    case MTNP_E_NON_SYMMETRIC: return "non-symmetric matrix";
    case MTNP_E_SINGULAR_MATRIX: return "singular matrix";
    case MTNP_E_NEWTON_BREAKDOWN: return "newton breakdown";
    case MTNP_E_AV_STALLED: return "av stalled";
    case MTNP_E_CRITICAL_CANDIDATE: return "critical candidate";
    case MTNP_E_L_UP_IMPOSSIBLE: return "level raise impossible";
    case MTNP_E_BAD_ENDPOINTS: return "bad endpoints";
    case MTNP_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* mtnp_outcome_string(mtnp_outcome outcome) {
  switch (outcome) {
    case MTNP_SADDLE_FOUND: return "SaddleFound";
    case MTNP_STALLED: return "Stalled";
    case MTNP_MAX_ITER: return "MaxIter";
    case MTNP_BREAKDOWN: return "Breakdown";
  }
  return "Unknown";
}

const char* mtnp_last_error(void) { return last_error.c_str(); }

void mtnp_string_free(char* s) { delete[] s; }

void mtnp_solve_config_default(mtnp_solve_config* config) {
  if (config == nullptr) return;
  const mtnpass::SolveConfig d;
  config->gtol = d.gtol;
  config->xtol = d.xtol;
  config->hull_tol = d.hull_tol;
  config->eta = d.eta;
  config->max_iter = d.max_iter;
  config->radius = d.radius;
  config->newton_handoff_gap = d.newton_handoff_gap;
  config->root_tol = d.root_tol;
  config->denom_tol = d.denom_tol;
  config->seed = d.seed;
  config->level_policy = MTNP_LEVEL_MIDPOINT;
}

mtnp_status mtnp_objective_builtin(const char* name, mtnp_objective** out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    *out = new mtnp_objective{mtnpass::builtin(name)};
  });
}

mtnp_status mtnp_objective_quadratic_json(const char* json, mtnp_objective** out) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    const auto model = mtnpass::QuadraticModel::from_json(json);
    *out = new mtnp_objective{mtnpass::quadratic_objective(model)};
  });
}

mtnp_status mtnp_objective_quadratic(int n, const double* h, const double* g, double c, mtnp_objective** out) {
  return guarded([&] {
    require(n >= 1 && h != nullptr && g != nullptr && out != nullptr, "bad quadratic arguments");
    const mtnpass::Mat hm = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(h, n, n);
    const mtnpass::Vec gv = Eigen::Map<const mtnpass::Vec>(g, n);
    *out = new mtnp_objective{mtnpass::quadratic_objective(mtnpass::QuadraticModel(hm, gv, c))};
  });
}

void mtnp_objective_free(mtnp_objective* obj) { delete obj; }

int mtnp_objective_dimension(const mtnp_objective* obj) { return obj == nullptr ? 0 : obj->obj.dimension(); }

mtnp_status mtnp_objective_value(const mtnp_objective* obj, const double* x, double* out) {
  return guarded([&] {
    require(obj != nullptr && x != nullptr && out != nullptr, "null argument");
    *out = obj->obj.value(Eigen::Map<const mtnpass::Vec>(x, obj->obj.dimension()));
  });
}

mtnp_status mtnp_objective_gradient(const mtnp_objective* obj, const double* x, double* out) {
  return guarded([&] {
    require(obj != nullptr && x != nullptr && out != nullptr, "null argument");
    const int n = obj->obj.dimension();
    Eigen::Map<mtnpass::Vec>(out, n) = obj->obj.gradient(Eigen::Map<const mtnpass::Vec>(x, n));
  });
}

mtnp_status mtnp_solve(const mtnp_objective* obj, const double* a, const double* b, const mtnp_solve_config* config,
                       mtnp_report** out) {
  return guarded([&] {
    require(obj != nullptr && a != nullptr && b != nullptr && out != nullptr, "null argument");
    mtnp_solve_config c;
    mtnp_solve_config_default(&c);
    if (config != nullptr) c = *config;
    const int n = obj->obj.dimension();
    const mtnpass::Vec av = Eigen::Map<const mtnpass::Vec>(a, n);
    const mtnpass::Vec bv = Eigen::Map<const mtnpass::Vec>(b, n);
    *out = new mtnp_report{mtnpass::solve(obj->obj, av, bv, to_config(c))};
  });
}

void mtnp_report_free(mtnp_report* report) { delete report; }

mtnp_outcome mtnp_report_outcome(const mtnp_report* report) {
  if (report == nullptr) return MTNP_BREAKDOWN;
  switch (report->report.status) {
    case mtnpass::SolveStatus::SaddleFound: return MTNP_SADDLE_FOUND;
    case mtnpass::SolveStatus::Stalled: return MTNP_STALLED;
    case mtnpass::SolveStatus::MaxIter: return MTNP_MAX_ITER;
    case mtnpass::SolveStatus::Breakdown: return MTNP_BREAKDOWN;
  }
  return MTNP_BREAKDOWN;
}

int mtnp_report_dimension(const mtnp_report* report) {
  return report == nullptr ? 0 : static_cast<int>(report->report.x.size());
}

const double* mtnp_report_point(const mtnp_report* report) {
  return report == nullptr ? nullptr : report->report.x.data();
}

double mtnp_report_value(const mtnp_report* report) { return report == nullptr ? 0.0 : report->report.f; }

double mtnp_report_grad_norm(const mtnp_report* report) {
  return report == nullptr ? 0.0 : report->report.grad_norm;
}

int mtnp_report_morse_index(const mtnp_report* report) {
  return report == nullptr ? -1 : report->report.morse_index;
}

int mtnp_report_iterations(const mtnp_report* report) {
  return report == nullptr ? 0 : report->report.iterations;
}

size_t mtnp_report_trace_size(const mtnp_report* report) {
  return report == nullptr ? 0 : report->report.trace.size();
}

mtnp_status mtnp_report_trace_record(const mtnp_report* report, size_t i, mtnp_trace_record* out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "null argument");
    require(i < report->report.trace.size(), "trace index out of range");
    const auto& r = report->report.trace[i];
    out->iteration = r.iteration;
    out->kind = mtnpass::to_string(r.kind);
    out->level = r.level;
    out->g = r.g;
    out->gap = r.gap;
    out->x = r.x.data();
  });
}

mtnp_status mtnp_report_json(const mtnp_report* report, char** out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "null argument");
    *out = copy_string(mtnpass::to_json(report->report).dump(2));
  });
}

mtnp_status mtnp_report_trace_json(const mtnp_report* report, char** out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "null argument");
    *out = copy_string(mtnpass::trace_to_json(report->report.trace).dump(2));
  });
}

mtnp_status mtnp_verify(const char* suite, const char* function, uint64_t seed, char** json, int* failures) {
  return guarded([&] {
    require(suite != nullptr && json != nullptr && failures != nullptr, "null argument");
    const auto result = mtnpass::run_verify_suite(suite, function == nullptr ? "" : function, seed);
    *json = copy_string(result.report.dump(2));
    *failures = result.failures;
  });
}

}  // extern "C"
