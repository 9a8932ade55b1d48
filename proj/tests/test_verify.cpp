#include "mtnpass/quadmodel.hpp"
#include "mtnpass/reports.hpp"
#include "mtnpass/verify.hpp"

#include <doctest.h>

#include <random>

using namespace mtnpass;

namespace {
Vec v2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}
}  // namespace

TEST_CASE("relative error has a unit floor") {
  Mat a(1, 1), b(1, 1);
  a << 1e-6;
  b << 2e-6;
  CHECK(relative_error(a, b) == doctest::Approx(1e-6));
  a << 100.0;
  b << 101.0;
  CHECK(relative_error(a, b) == doctest::Approx(0.01));
}

TEST_CASE("gradient formula check on quadratics is tight") {
  std::mt19937_64 rng(5);
  int checked = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + i % 5;
    const QuadraticModel m = generate_morse1(n, 300 + static_cast<std::uint64_t>(i));
    const SaddleLocation s = saddle_of(m);
    const double lam = std::abs(m.eigenvalues()(n - 1));
    const auto samples = sample_near_saddle(s.x, m.negative_direction(), s.value, 1, rng,
                                            SampleSpec{0.5, 0.1, 0.05 * lam, 0.5 * lam});
    const GradCheckReport r = check_grad_formulas(quadratic_objective(m), samples);
    checked += r.checked;
    worst = std::max({worst, r.max_rel_error_gradient, r.max_rel_error_hessian});
  }
  CHECK(checked >= 40);
  CHECK(worst < 1e-6);
}

TEST_CASE("gradient formula check on six-hump camel") {
  const Objective f = six_hump_camel();
  std::mt19937_64 rng(1);
  const Vec v = decompose(f.hessian(v2(0, 0))).vectors.col(1);
  const auto samples = sample_near_saddle(v2(0, 0), v, 0.0, 20, rng);
  const GradCheckReport r = check_grad_formulas(f, samples);
  CHECK(r.checked + r.skipped == 20);
  CHECK(r.checked >= 15);
  CHECK(r.failed == 0);
  CHECK(r.max_rel_error_gradient < 1e-4);
  CHECK(r.max_rel_error_hessian < 1e-4);
}

TEST_CASE("inadmissible samples are skipped") {
  const Objective f = six_hump_camel();
  // level above the saddle value along v = e1 through the origin: tiny or empty sections
  std::vector<GradSample> samples{{v2(0, 0), v2(1, 0), 0.5}, {v2(0, 0), v2(0, 1), 5.0}};
  const GradCheckReport r = check_grad_formulas(f, samples);
  CHECK(r.skipped == 2);
  CHECK(r.failed == 0);
}

TEST_CASE("Hessian stability") {
  const QuadraticModel m = generate_morse1(3, 8);
  const StabilityReport q = check_hessian_stability(quadratic_objective(m), saddle_of(m).x);
  REQUIRE(q.applicable);
  for (const auto& row : q.along_v_bar) CHECK(row.deviation <= 1e-9 * row.ref_norm);
  for (const auto& row : q.along_perturbed) CHECK(row.deviation <= 1e-9 * row.ref_norm);
  CHECK(q.passed());

  const StabilityReport camel = check_hessian_stability(six_hump_camel(), v2(0, 0));
  REQUIRE(camel.applicable);
  CHECK(camel.along_v_bar.size() == 8);
  CHECK(camel.along_v_bar.back().deviation < 1e-2 * camel.along_v_bar.back().ref_norm);
  CHECK(camel.passed());

  const StabilityReport off = check_hessian_stability(six_hump_camel(), v2(0.3, 0.1));
  CHECK_FALSE(off.applicable);

  const Objective degenerate("x1^2 - x2^4", 2, [](const Vec& x) { return x(0) * x(0) - std::pow(x(1), 4); },
                             [](const Vec& x) { return v2(2 * x(0), -4 * std::pow(x(1), 3)); },
                             [](const Vec& x) {
                               Mat h = Mat::Zero(2, 2);
                               h(0, 0) = 2.0;
                               h(1, 1) = -12.0 * x(1) * x(1);
                               return h;
                             });
  const StabilityReport na = check_hessian_stability(degenerate, v2(0, 0));
  CHECK_FALSE(na.applicable);
  CHECK_FALSE(na.passed());
}

TEST_CASE("convexity on quadratics and near the camel saddle") {
  const QuadraticModel m = generate_morse1(3, 21);
  const SaddleLocation s = saddle_of(m);
  const double lam = std::abs(m.eigenvalues()(2));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  Vec w(3);
  for (int k = 0; k < 3; ++k) w(k) = normal(rng);
  const Vec v = perturb_direction(m.negative_direction(), w, 0.08);
  CHECK((v - m.negative_direction()).norm() == doctest::Approx(0.08));
  const ConvexityReport q = check_convexity_region(quadratic_objective(m), s.x, s.value - 0.5 * lam, v, 0.5, 100, 4);
  CHECK(q.violations == 0);
  CHECK(q.min_reduced_eigenvalue > 0.0);

  const Objective f = six_hump_camel();
  const Vec vb = decompose(f.hessian(v2(0, 0))).vectors.col(1);
  const ConvexityReport c = check_convexity_region(f, v2(0, 0), -0.05, vb, 0.05, 100, 4);
  CHECK(c.violations == 0);
}

TEST_CASE("tightness probe records shrinking radii") {
  const Objective f = tightness2d();
  const Vec v = v2(1, -1).normalized();
  const auto rows = convexity_radius_probe(f, v2(0, 0), v, {-0.1, -0.01, -0.001}, 100, 0);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].radius < rows[0].radius);
  CHECK(rows[2].radius < rows[1].radius);
}

TEST_CASE("suites") {
  SuiteResult r = run_verify_suite("quadratic-oracle", "", 0);
  CHECK(r.failures == 0);
  CHECK(r.report["models"] == 200);
  r = run_verify_suite("grad-formulas", "six_hump_camel", 0);
  CHECK(r.failures == 0);
  CHECK_THROWS_AS(run_verify_suite("nope", "", 0), Error);
  CHECK_THROWS_AS(run_verify_suite("convexity", "rosenbrock", 0), Error);
  const SuiteResult a = run_verify_suite("hessian-stability", "", 3);
  const SuiteResult b = run_verify_suite("hessian-stability", "", 3);
  CHECK(a.report.dump() == b.report.dump());
}
