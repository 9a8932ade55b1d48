#include "mtnpass/mtnpass.h"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstring>
#include <string>

TEST_CASE("C API objectives") {
  mtnp_objective* f = nullptr;
  REQUIRE(mtnp_objective_builtin("six_hump_camel", &f) == MTNP_OK);
  CHECK(mtnp_objective_dimension(f) == 2);
  const double x[2] = {1.0, 1.0};
  double v = 0.0;
  CHECK(mtnp_objective_value(f, x, &v) == MTNP_OK);
  CHECK(v == doctest::Approx(4.0 - 2.1 + 1.0 / 3.0 + 1.0));
  double g[2];
  const double o[2] = {0.0, 0.0};
  CHECK(mtnp_objective_gradient(f, o, g) == MTNP_OK);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);
  mtnp_objective_free(f);

  mtnp_objective* bad = nullptr;
  CHECK(mtnp_objective_builtin("rosenbrock", &bad) == MTNP_E_UNKNOWN_FUNCTION);
  CHECK(bad == nullptr);
  CHECK(std::strlen(mtnp_last_error()) > 0);
  CHECK(mtnp_objective_builtin(nullptr, &bad) == MTNP_E_INVALID_ARGUMENT);

  CHECK(mtnp_objective_quadratic_json("{\"H\": [[1, 2], [0, 1]], \"g\": [0, 0], \"c\": 0}", &bad) ==
        MTNP_E_NON_SYMMETRIC);
  CHECK(mtnp_objective_quadratic_json("{oops", &bad) == MTNP_E_PARSE);
}

TEST_CASE("C API solve on a quadratic") {
  const double h[4] = {2.0, 0.5, 0.5, -1.0};
  const double g[2] = {0.3, -0.4};
  mtnp_objective* q = nullptr;
  REQUIRE(mtnp_objective_quadratic(2, h, g, 1.0, &q) == MTNP_OK);
  // saddle -H^{-1} g
  const double det = 2.0 * -1.0 - 0.25;
  const double sx = -(-1.0 * 0.3 - 0.5 * -0.4) / det;
  const double sy = -(-0.5 * 0.3 + 2.0 * -0.4) / det;

  mtnp_solve_config cfg;
  mtnp_solve_config_default(&cfg);
  CHECK(cfg.gtol == 1e-8);
  CHECK(cfg.max_iter == 500);
  const double a[2] = {sx + 0.3, sy + 2.0};
  const double b[2] = {sx - 0.2, sy - 2.0};
  mtnp_report* r = nullptr;
  REQUIRE(mtnp_solve(q, a, b, &cfg, &r) == MTNP_OK);
  CHECK(mtnp_report_outcome(r) == MTNP_SADDLE_FOUND);
  CHECK(mtnp_report_dimension(r) == 2);
  const double* x = mtnp_report_point(r);
  CHECK(std::hypot(x[0] - sx, x[1] - sy) < 1e-8);
  CHECK(mtnp_report_morse_index(r) == 1);
  REQUIRE(mtnp_report_trace_size(r) >= 1);
  mtnp_trace_record rec;
  CHECK(mtnp_report_trace_record(r, 0, &rec) == MTNP_OK);
  CHECK(std::string(rec.kind) == "Init");
  CHECK(mtnp_report_trace_record(r, 100000, &rec) == MTNP_E_INVALID_ARGUMENT);

  char* js = nullptr;
  REQUIRE(mtnp_report_json(r, &js) == MTNP_OK);
  const auto j = nlohmann::json::parse(js);
  CHECK(j["status"] == "SaddleFound");
  mtnp_string_free(js);
  REQUIRE(mtnp_report_trace_json(r, &js) == MTNP_OK);
  CHECK(nlohmann::json::parse(js)["records"].size() == mtnp_report_trace_size(r));
  mtnp_string_free(js);
  mtnp_report_free(r);

  const double same[2] = {0.0, 0.0};
  CHECK(mtnp_solve(q, same, same, nullptr, &r) == MTNP_E_BAD_ENDPOINTS);
  mtnp_objective_free(q);
}

TEST_CASE("C API verify and strings") {
  char* js = nullptr;
  int failures = -1;
  REQUIRE(mtnp_verify("quadratic-oracle", nullptr, 0, &js, &failures) == MTNP_OK);
  CHECK(failures == 0);
  mtnp_string_free(js);
  CHECK(mtnp_verify("bogus", "", 0, &js, &failures) == MTNP_E_INVALID_ARGUMENT);
  CHECK(std::string(mtnp_status_string(MTNP_OK)) == "ok");
  CHECK(std::string(mtnp_outcome_string(MTNP_STALLED)) == "Stalled");
}
