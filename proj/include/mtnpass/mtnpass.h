/* C interface to the mtnpass saddle search library. */
#ifndef MTNPASS_H
#define MTNPASS_H

#include <stddef.h>
#include <stdint.h>

#if defined(MTNPASS_BUILDING_LIBRARY)
#define MTNP_API __attribute__((visibility("default")))
#else
#define MTNP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mtnp_status {
  MTNP_OK = 0,
  MTNP_E_INVALID_ARGUMENT,
  MTNP_E_UNKNOWN_FUNCTION,
  MTNP_E_PARSE,
  MTNP_E_EVALUATION,
  MTNP_E_NO_LINE_MAX,
  MTNP_E_CROSSING_OUTSIDE_REGION,
  MTNP_E_BAD_DIRECTION,
  MTNP_E_DEGENERATE_DENOMINATOR,
  MTNP_E_NOT_CONCAVE_ALONG_V,
  MTNP_E_NO_ESTIMATE,
  MTNP_E_NON_SYMMETRIC,
  MTNP_E_SINGULAR_MATRIX,
  MTNP_E_NEWTON_BREAKDOWN,
  MTNP_E_AV_STALLED,
  MTNP_E_CRITICAL_CANDIDATE,
  MTNP_E_L_UP_IMPOSSIBLE,
  MTNP_E_BAD_ENDPOINTS,
  MTNP_E_INTERNAL
} mtnp_status;

typedef enum mtnp_outcome {
  MTNP_SADDLE_FOUND = 0,
  MTNP_STALLED,
  MTNP_MAX_ITER,
  MTNP_BREAKDOWN
} mtnp_outcome;

typedef enum mtnp_level_policy { MTNP_LEVEL_MIDPOINT = 0, MTNP_LEVEL_QUADRATIC_ESTIMATE } mtnp_level_policy;

typedef struct mtnp_solve_config {
  double gtol;
  double xtol;
  double hull_tol;
  double eta;
  int max_iter;
  double radius;
  double newton_handoff_gap;
  double root_tol;
  double denom_tol;
  uint64_t seed;
  mtnp_level_policy level_policy;
} mtnp_solve_config;

typedef struct mtnp_trace_record {
  int iteration;
  const char* kind; /* "Init", "PD", "Av", "LUp", "LDown", "Newton" */
  double level;
  double g;
  double gap;
  const double* x; /* midpoint, length = objective dimension; owned by the report */
} mtnp_trace_record;

typedef struct mtnp_objective mtnp_objective;
typedef struct mtnp_report mtnp_report;

MTNP_API const char* mtnp_status_string(mtnp_status status);
MTNP_API const char* mtnp_outcome_string(mtnp_outcome outcome);
/* Message of the last failed call on this thread ("" if none). */
MTNP_API const char* mtnp_last_error(void);
MTNP_API void mtnp_string_free(char* s);

MTNP_API void mtnp_solve_config_default(mtnp_solve_config* config);

MTNP_API mtnp_status mtnp_objective_builtin(const char* name, mtnp_objective** out);
/* JSON object with keys "H" (n x n rows), "g" (n) and "c". */
MTNP_API mtnp_status mtnp_objective_quadratic_json(const char* json, mtnp_objective** out);
/* h is row-major n x n. */
MTNP_API mtnp_status mtnp_objective_quadratic(int n, const double* h, const double* g, double c,
                                              mtnp_objective** out);
MTNP_API void mtnp_objective_free(mtnp_objective* obj);
MTNP_API int mtnp_objective_dimension(const mtnp_objective* obj);
MTNP_API mtnp_status mtnp_objective_value(const mtnp_objective* obj, const double* x, double* out);
MTNP_API mtnp_status mtnp_objective_gradient(const mtnp_objective* obj, const double* x, double* out);

/* a and b have length mtnp_objective_dimension(obj); config may be NULL. */
MTNP_API mtnp_status mtnp_solve(const mtnp_objective* obj, const double* a, const double* b,
                                const mtnp_solve_config* config, mtnp_report** out);
MTNP_API void mtnp_report_free(mtnp_report* report);
MTNP_API mtnp_outcome mtnp_report_outcome(const mtnp_report* report);
MTNP_API int mtnp_report_dimension(const mtnp_report* report);
MTNP_API const double* mtnp_report_point(const mtnp_report* report);
MTNP_API double mtnp_report_value(const mtnp_report* report);
MTNP_API double mtnp_report_grad_norm(const mtnp_report* report);
MTNP_API int mtnp_report_morse_index(const mtnp_report* report);
MTNP_API int mtnp_report_iterations(const mtnp_report* report);
MTNP_API size_t mtnp_report_trace_size(const mtnp_report* report);
MTNP_API mtnp_status mtnp_report_trace_record(const mtnp_report* report, size_t i, mtnp_trace_record* out);
/* JSON strings; release with mtnp_string_free. */
MTNP_API mtnp_status mtnp_report_json(const mtnp_report* report, char** out);
MTNP_API mtnp_status mtnp_report_trace_json(const mtnp_report* report, char** out);

/* Runs a verification suite. function may be NULL or "" for the suite defaults. */
MTNP_API mtnp_status mtnp_verify(const char* suite, const char* function, uint64_t seed, char** json,
                                 int* failures);

#ifdef __cplusplus
}
#endif

#endif
