#include "mtnpass/pardist.hpp"
#include "mtnpass/quadmodel.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace mtnpass;

namespace {
Vec v2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}
QuadraticModel model2(double c = 0.0, Vec g = Vec::Zero(2)) {
  Mat h(2, 2);
  h << 1, 0, 0, -1;
  return QuadraticModel(h, std::move(g), c);
}
const TrustRegion kRegion(Vec::Zero(2), 10.0);
PardistOptions with_hessian() {
  PardistOptions o;
  o.want_hessian = true;
  return o;
}
}  // namespace

TEST_CASE("parallel distance on the model saddle") {
  const Objective f = quadratic_objective(model2());
  const ParallelDistanceEval e = eval_pardist(f, v2(1, 0), v2(0, 1), -0.5, kRegion, with_hessian());
  CHECK(e.g == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(e.g2 == doctest::Approx(8.0).epsilon(1e-12));
  REQUIRE(e.has_derivatives());
  CHECK((*e.grad_g - v2(std::sqrt(2.0), 0)).norm() < 1e-9);
  CHECK((*e.grad_g2 - v2(8, 0)).norm() < 1e-9);
  CHECK((*e.grad_g2 - 2.0 * e.g * *e.grad_g).norm() < 1e-12);
  Mat expect(2, 2);
  expect << 8, 0, 0, 0;
  REQUIRE(e.hess_g2);
  CHECK((*e.hess_g2 - expect).norm() < 1e-8);
  CHECK((*e.hess_g2 - e.hess_g2->transpose()).norm() == 0.0);
}

TEST_CASE("empty section has no derivatives") {
  const Objective f = quadratic_objective(model2());
  const ParallelDistanceEval e = eval_pardist(f, v2(1, 0), v2(0, 1), 1.0, kRegion, with_hessian());
  CHECK(e.g == 0.0);
  CHECK(e.g2 == 0.0);
  CHECK_FALSE(e.has_derivatives());
  CHECK_FALSE(e.hess_g2.has_value());
}

TEST_CASE("degenerate denominator") {
  // f = K x1 - x2^2 along v = e2: crossings at t = +-1 with |v^T grad f| / |grad f| = 2 / K
  const double K = 1e9;
  const Objective f("steep", 2, [K](const Vec& x) { return K * x(0) - x(1) * x(1); },
                    [K](const Vec& x) { return v2(K, -2.0 * x(1)); });
  try {
    eval_pardist(f, v2(0, 0), v2(0, 1), -1.0, kRegion);
    FAIL("expected DegenerateDenominator");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateDenominator);
  }
  CHECK(pardist_squared(f, v2(0, 0), v2(0, 1), -1.0, kRegion) == doctest::Approx(4.0));
}

TEST_CASE("six-hump camel derivatives against differences of the numeric g^2") {
  const Objective f = six_hump_camel();
  const Vec v = decompose(f.hessian(v2(0, 0))).vectors.col(1);
  const Vec x = v2(0.05, 0.02);
  const double level = -0.05;
  const ParallelDistanceEval e = eval_pardist(f, x, v, level, kRegion, with_hessian());
  REQUIRE(e.has_derivatives());
  const auto g2 = [&](const oracle::Vec& p) { return pardist_squared(f, p, v, level, kRegion); };
  const Vec fd = oracle::central_gradient(g2, x, 1e-5);
  const Mat fdh = oracle::central_hessian(g2, x, 1e-4);
  CHECK((*e.grad_g2 - fd).cwiseAbs().maxCoeff() / std::max(1.0, e.grad_g2->cwiseAbs().maxCoeff()) < 1e-4);
  CHECK((*e.hess_g2 - fdh).cwiseAbs().maxCoeff() / std::max(1.0, e.hess_g2->cwiseAbs().maxCoeff()) < 1e-4);
}

TEST_CASE("closed form g^2 on the model saddle") {
  const QuadraticModel m = model2();
  ClosedFormG2 c = closed_form_g2_quadratic(m, v2(1, 0), v2(0, 1), -0.5);
  CHECK(c.g2 == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(c.positive_branch);
  Mat expect(2, 2);
  expect << 8, 0, 0, 0;
  CHECK((c.hessian - expect).norm() < 1e-14);
  const SpectralDecomposition eig = decompose(c.hessian);
  CHECK(eig.values(0) == doctest::Approx(8.0));
  CHECK(std::abs(eig.values(1)) < 1e-14);

  c = closed_form_g2_quadratic(m, v2(0, 0), v2(0, 1), 0.5);
  CHECK(c.g2 == 0.0);
  CHECK_FALSE(c.positive_branch);
  CHECK(c.gradient.norm() == 0.0);

  try {
    closed_form_g2_quadratic(m, v2(0, 0), v2(1, 0), 0.0);
    FAIL("expected NotConcaveAlongV");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotConcaveAlongV);
  }
}

TEST_CASE("closed form agrees with the scalar root formula and the numeric section") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 40; ++i) {
    const int n = 2 + i % 5;
    const QuadraticModel m = generate_morse1(n, 500 + static_cast<std::uint64_t>(i));
    const SaddleLocation s = saddle_of(m);
    Vec v = m.negative_direction();
    Vec w(n);
    for (int k = 0; k < n; ++k) w(k) = normal(rng);
    v = (v + 0.1 * w.normalized()).normalized();
    if (!(v.dot(m.hessian() * v) < 0)) continue;
    Vec x = s.x;
    for (int k = 0; k < n; ++k) x(k) += 0.3 * normal(rng);
    const double level = s.value - 0.4;
    const double closed = closed_form_g2_quadratic(m, x, v, level).g2;
    const double scalar = oracle::quadratic_g2(m.hessian(), m.linear(), m.constant(), x, v, level);
    const double numeric = pardist_squared(quadratic_objective(m), x, v, level, TrustRegion(x, 100.0));
    CHECK(std::abs(closed - scalar) <= 1e-10 * (1.0 + scalar));
    CHECK(std::abs(numeric - scalar) <= 1e-8 * (1.0 + scalar));
  }
}

TEST_CASE("closed-form Hessian eigenstructure") {
  for (int n = 2; n <= 6; ++n) {
    const QuadraticModel m = generate_morse1(n, 900 + static_cast<std::uint64_t>(n));
    const Mat hg = closed_form_g2_hessian(m.hessian(), m.negative_direction());
    Eigen::SelfAdjointEigenSolver<Mat> es(hg);
    std::vector<double> got(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::vector<double> want{0.0};
    const Vec lam = m.eigenvalues();
    for (int i = 0; i < n - 1; ++i) want.push_back(-8.0 * lam(i) / lam(n - 1));
    std::sort(want.begin(), want.end());
    for (int i = 0; i < n; ++i) CHECK(std::abs(got[static_cast<std::size_t>(i)] - want[static_cast<std::size_t>(i)]) <= 1e-8 * (1.0 + std::abs(want[static_cast<std::size_t>(i)])));
  }
}

TEST_CASE("critical level estimate") {
  CHECK(std::abs(estimate_critical_level(model2(), v2(0, 1))) < 1e-15);
  Mat h(2, 2);
  h << 2, 0, 0, -1;
  CHECK(estimate_critical_level(QuadraticModel(h, Vec::Zero(2), 3.0), v2(0, 1)) == doctest::Approx(3.0));
  CHECK(estimate_critical_level(model2(0.0, v2(0, 1)), v2(0, 1)) == doctest::Approx(0.5));
  for (int n = 2; n <= 6; ++n) {
    const QuadraticModel m = generate_morse1(n, 40 + static_cast<std::uint64_t>(n));
    CHECK(estimate_critical_level(m, m.negative_direction()) == doctest::Approx(saddle_of(m).value).epsilon(1e-9));
  }
}
