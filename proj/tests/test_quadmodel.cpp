#include "mtnpass/quadmodel.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace mtnpass;

namespace {
Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}
}  // namespace

TEST_CASE("Jacobi decomposition of small matrices") {
  Mat d(2, 2);
  d << 1, 0, 0, -1;
  SpectralDecomposition e = decompose(d);
  CHECK(e.values(0) == 1.0);
  CHECK(e.values(1) == -1.0);
  CHECK(std::abs(e.vectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors(1, 1)) == doctest::Approx(1.0));

  Mat h(2, 2);
  h << 8, 1, 1, -8;
  e = decompose(h);
  CHECK(e.values(0) == doctest::Approx(std::sqrt(65.0)).epsilon(1e-14));
  CHECK(e.values(1) == doctest::Approx(-std::sqrt(65.0)).epsilon(1e-14));
  CHECK(morse_index(e.values) == 1);

  e = decompose(Mat::Identity(3, 3));
  CHECK((e.values - Vec::Ones(3)).norm() == 0.0);
  CHECK((e.vectors.transpose() * e.vectors - Mat::Identity(3, 3)).norm() < 1e-14);
}

TEST_CASE("Jacobi agrees with a reference eigensolver") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int n = 2; n <= 8; ++n) {
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    const Mat h = a + a.transpose();
    const SpectralDecomposition e = decompose(h);
    Eigen::SelfAdjointEigenSolver<Mat> ref(h);
    const Vec ref_desc = ref.eigenvalues().reverse();
    CHECK((e.values - ref_desc).cwiseAbs().maxCoeff() < 1e-10 * h.norm());
    for (int i = 0; i < n; ++i) {
      CHECK((h * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm() < 1e-10 * h.norm());
    }
    CHECK((e.vectors.transpose() * e.vectors - Mat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("non-symmetric input is rejected") {
  Mat h(2, 2);
  h << 1, 2, 0, 1;
  try {
    decompose(h);
    FAIL("expected NonSymmetric");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonSymmetric);
  }
}

TEST_CASE("saddle of a quadratic model") {
  Mat h(2, 2);
  h << 1, 0, 0, -1;
  SaddleLocation s = saddle_of(QuadraticModel(h, Vec::Zero(2), 2.5));
  CHECK(s.x.norm() == 0.0);
  CHECK(s.value == 2.5);

  s = saddle_of(QuadraticModel(h, vec({0, 1}), 0.0));
  CHECK((s.x - vec({0, 1})).norm() < 1e-15);
  CHECK(s.value == doctest::Approx(0.5));  // 1/2 (0 - 1) + 1

  Mat h3 = Mat::Zero(3, 3);
  h3.diagonal() << 2, 3, -1;
  s = saddle_of(QuadraticModel(h3, vec({2, 0, 1}), 0.0));
  CHECK((s.x - vec({-1, 0, 1})).norm() < 1e-15);

  Mat sing(2, 2);
  sing << 1, 0, 0, 0;
  try {
    saddle_of(QuadraticModel(sing, Vec::Zero(2), 0.0));
    FAIL("expected SingularMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMatrix);
  }
}

TEST_CASE("quadratic model JSON") {
  const QuadraticModel m = QuadraticModel::from_json(R"({"H": [[2, 0.5], [0.5, -1]], "g": [1, -2], "c": 0.25})");
  CHECK(m.dimension() == 2);
  CHECK(m.morse_index() == 1);
  CHECK(m.value(vec({1, 1})) == doctest::Approx(0.5 * (2 + 1 - 1) + (1 - 2) + 0.25));
  const QuadraticModel back = QuadraticModel::from_json(m.to_json());
  CHECK((back.hessian() - m.hessian()).norm() == 0.0);
  CHECK((back.linear() - m.linear()).norm() == 0.0);
  CHECK(back.constant() == m.constant());

  auto code_of = [](const std::string& text) {
    try {
      QuadraticModel::from_json(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code_of(R"({"H": [[1, 2], [0, 1]], "g": [0, 0], "c": 0})") == ErrorCode::NonSymmetric);
  CHECK(code_of(R"({"H": [[1, 0], [0, 1]], "g": [0, 0]})") == ErrorCode::ParseError);
  CHECK(code_of(R"({"H": [[1, 0], [0, 1]], "g": [0], "c": 0})") == ErrorCode::ParseError);
  CHECK(code_of(R"({"H": [[1, 0], [0, 1]], "g": [0, 0], "c": 0, "x": 1})") == ErrorCode::ParseError);
  CHECK(code_of("{not json") == ErrorCode::ParseError);
}

TEST_CASE("random Morse-1 models") {
  const QuadraticModel a = generate_morse1(2, 0);
  const QuadraticModel b = generate_morse1(2, 0);
  CHECK((a.hessian() - b.hessian()).norm() == 0.0);
  CHECK((a.linear() - b.linear()).norm() == 0.0);
  for (int n = 2; n <= 6; ++n) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const QuadraticModel m = generate_morse1(n, seed);
      CHECK(m.morse_index() == 1);
      const Vec v = m.negative_direction();
      CHECK(v.dot(m.hessian() * v) < 0.0);
      const Vec mags = m.eigenvalues().cwiseAbs();
      CHECK(mags.minCoeff() >= 0.5 - 1e-12);
      CHECK(mags.maxCoeff() <= 5.0 + 1e-12);
    }
  }
}

TEST_CASE("Newton refinement") {
  const QuadraticModel m = generate_morse1(4, 3);
  const Objective q = quadratic_objective(m);
  const TrustRegion big(Vec::Zero(4), 100.0);
  NewtonResult r = newton_refine(q, Vec::Ones(4), big, 1e-10, 20);
  CHECK(r.status == NewtonStatus::Converged);
  CHECK(r.iterations == 1);
  CHECK((r.x - saddle_of(m).x).norm() < 1e-12);

  const Objective camel = six_hump_camel();
  r = newton_refine(camel, vec({0.1, 0.05}), TrustRegion(Vec::Zero(2), 10.0), 1e-12, 20);
  CHECK(r.status == NewtonStatus::Converged);
  CHECK(r.iterations <= 6);
  CHECK(r.x.norm() < 1e-12);
  CHECK(r.morse_index == 1);

  r = newton_refine(camel, vec({-1.0, 0.8}), TrustRegion(Vec::Zero(2), 10.0), 1e-10, 50);
  CHECK(r.status == NewtonStatus::Converged);
  CHECK(r.morse_index == 1);
  const auto& census = oracle::six_hump_census();
  double nearest = 1e300;
  for (const auto& p : census) nearest = std::min(nearest, std::hypot(r.x(0) - p.x1, r.x(1) - p.x2));
  CHECK(nearest < 1e-9);
  CHECK(std::hypot(r.x(0) + 1.1092053368047864, r.x(1) - 0.76826809250953984) < 1e-9);
}

TEST_CASE("Newton refinement errors") {
  Mat h(2, 2);
  h << 1, 0, 0, 1e-14;
  const Objective flat = quadratic_objective(QuadraticModel(h, Vec::Ones(2), 0.0));
  try {
    newton_refine(flat, Vec::Zero(2), TrustRegion(Vec::Zero(2), 10.0), 1e-10, 5);
    FAIL("expected NewtonBreakdown");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NewtonBreakdown);
  }
  Mat h2(2, 2);
  h2 << 1, 0, 0, -1;
  const Objective q = quadratic_objective(QuadraticModel(h2, vec({-5, 0}), 0.0));
  const NewtonResult r = newton_refine(q, Vec::Zero(2), TrustRegion(Vec::Zero(2), 1.0), 1e-10, 5);
  CHECK(r.status == NewtonStatus::LeftRegion);
}
