#include "mtnpass/objective.hpp"

#include "mtnpass/quadmodel.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace mtnpass {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EvaluationError: return "EvaluationError";
    case ErrorCode::NoLineMax: return "NoLineMax";
    case ErrorCode::CrossingOutsideRegion: return "CrossingOutsideRegion";
    case ErrorCode::BadDirection: return "BadDirection";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::NotConcaveAlongV: return "NotConcaveAlongV";
    case ErrorCode::NoEstimate: return "NoEstimate";
    case ErrorCode::NonSymmetric: return "NonSymmetric";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NewtonBreakdown: return "NewtonBreakdown";
    case ErrorCode::AvStalled: return "AvStalled";
    case ErrorCode::CriticalCandidate: return "CriticalCandidate";
    case ErrorCode::LUpImpossible: return "LUpImpossible";
    case ErrorCode::BadEndpoints: return "BadEndpoints";
  }
  return "Unknown";
}

Objective::Objective(std::string name, int dimension, ValueFn value, GradientFn gradient,
                     HessianFn hessian)
    : name_(std::move(name)),
      dimension_(dimension),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)),
      counters_(std::make_shared<Counters>()) {
  if (dimension_ < 1) throw Error(ErrorCode::InvalidArgument, "objective dimension must be >= 1");
  if (!value_ || !gradient_) throw Error(ErrorCode::InvalidArgument, "value and gradient are required");
}

void Objective::check_point(const Vec& x) const {
  if (x.size() != dimension_) {
    throw Error(ErrorCode::InvalidArgument, "point has length " + std::to_string(x.size()) +
                                                ", objective '" + name_ + "' expects " +
                                                std::to_string(dimension_));
  }
}

double Objective::value(const Vec& x) const {
  check_point(x);
  counters_->value.fetch_add(1, std::memory_order_relaxed);
  const double fx = value_(x);
  if (!std::isfinite(fx)) throw Error(ErrorCode::EvaluationError, "non-finite value of '" + name_ + "'");
  return fx;
}

Vec Objective::gradient(const Vec& x) const {
  check_point(x);
  counters_->gradient.fetch_add(1, std::memory_order_relaxed);
  Vec gx = gradient_(x);
  if (gx.size() != dimension_) throw Error(ErrorCode::EvaluationError, "gradient has wrong length");
  if (!gx.allFinite()) throw Error(ErrorCode::EvaluationError, "non-finite gradient of '" + name_ + "'");
  return gx;
}

Mat Objective::hessian(const Vec& x) const {
  check_point(x);
  counters_->hessian.fetch_add(1, std::memory_order_relaxed);
  Mat h;
  if (hessian_) {
    h = hessian_(x);
  } else {
    const double step = 1e-4 * std::max(1.0, x.lpNorm<Eigen::Infinity>());
    h.resize(dimension_, dimension_);
    Vec xp = x;
    for (int j = 0; j < dimension_; ++j) {
      xp(j) = x(j) + step;
      const Vec gp = gradient_(xp);
      xp(j) = x(j) - step;
      const Vec gm = gradient_(xp);
      xp(j) = x(j);
      h.col(j) = (gp - gm) / (2.0 * step);
    }
  }
  if (h.rows() != dimension_ || h.cols() != dimension_) {
    throw Error(ErrorCode::EvaluationError, "Hessian has wrong shape");
  }
  if (!h.allFinite()) throw Error(ErrorCode::EvaluationError, "non-finite Hessian of '" + name_ + "'");
  Mat sym = 0.5 * (h + h.transpose());
  return sym;
}

EvalCounts Objective::counts() const noexcept {
  return {counters_->value.load(), counters_->gradient.load(), counters_->hessian.load()};
}

void Objective::reset_counts() const noexcept {
  counters_->value = 0;
  counters_->gradient = 0;
  counters_->hessian = 0;
}

Objective Objective::without_analytic_hessian() const {
  return Objective(name_, dimension_, value_, gradient_);
}

TrustRegion::TrustRegion(Vec c, double r) : center(std::move(c)), radius(r) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::InvalidArgument, "trust region radius must be positive");
  }
}

bool TrustRegion::contains(const Vec& x) const { return (x - center).norm() <= radius; }

std::pair<double, double> TrustRegion::chord(const Vec& x, const Vec& v) const {
  // |x + t v - c|^2 = r^2 with |v| = 1
  const Vec d = x - center;
  const double b = v.dot(d);
  const double disc = b * b - (d.squaredNorm() - radius * radius);
  if (disc < 0.0) throw Error(ErrorCode::InvalidArgument, "line does not meet the trust region");
  const double s = std::sqrt(disc);
  return {-b - s, -b + s};
}

Vec fd_gradient(const Objective& obj, const Vec& x) {
  const double step = 1e-6 * std::max(1.0, x.lpNorm<Eigen::Infinity>());
  Vec out(x.size());
  Vec xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    xp(j) = x(j) + step;
    const double fp = obj.value(xp);
    xp(j) = x(j) - step;
    const double fm = obj.value(xp);
    xp(j) = x(j);
    out(j) = (fp - fm) / (2.0 * step);
  }
  return out;
}

Mat fd_hessian(const Objective& obj, const Vec& x) {
  const double step = 1e-4 * std::max(1.0, x.lpNorm<Eigen::Infinity>());
  const auto n = x.size();
  Mat h(n, n);
  Vec xp = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    xp(j) = x(j) + step;
    const Vec gp = obj.gradient(xp);
    xp(j) = x(j) - step;
    const Vec gm = obj.gradient(xp);
    xp(j) = x(j);
    h.col(j) = (gp - gm) / (2.0 * step);
  }
  return 0.5 * (h + h.transpose());
}

Objective six_hump_camel() {
  auto value = [](const Vec& x) {
    const double a = x(0), b = x(1);
    const double a2 = a * a, b2 = b * b;
    return (4.0 - 2.1 * a2 + a2 * a2 / 3.0) * a2 + a * b + 4.0 * (b2 - 1.0) * b2;
  };
  auto gradient = [](const Vec& x) {
    const double a = x(0), b = x(1);
    const double a2 = a * a;
    Vec g(2);
    g << 8.0 * a - 8.4 * a2 * a + 2.0 * a2 * a2 * a + b, a - 8.0 * b + 16.0 * b * b * b;
    return g;
  };
  auto hessian = [](const Vec& x) {
    const double a2 = x(0) * x(0);
    Mat h(2, 2);
    h << 8.0 - 25.2 * a2 + 10.0 * a2 * a2, 1.0,
         1.0, -8.0 + 48.0 * x(1) * x(1);
    return h;
  };
  return Objective("six_hump_camel", 2, value, gradient, hessian);
}

Objective tightness2d() {
  // f = (x2 - x1^2)(x1 - x2^2)
  auto value = [](const Vec& x) { return (x(1) - x(0) * x(0)) * (x(0) - x(1) * x(1)); };
  auto gradient = [](const Vec& x) {
    const double p = x(1) - x(0) * x(0);
    const double q = x(0) - x(1) * x(1);
    Vec g(2);
    g << p - 2.0 * x(0) * q, q - 2.0 * x(1) * p;
    return g;
  };
  auto hessian = [](const Vec& x) {
    const double p = x(1) - x(0) * x(0);
    const double q = x(0) - x(1) * x(1);
    Mat h(2, 2);
    h << -4.0 * x(0) - 2.0 * q, 1.0 + 4.0 * x(0) * x(1),
         1.0 + 4.0 * x(0) * x(1), -4.0 * x(1) - 2.0 * p;
    return h;
  };
  return Objective("tightness2d", 2, value, gradient, hessian);
}

Objective quadratic_objective(const QuadraticModel& model) {
  auto value = [model](const Vec& x) { return model.value(x); };
  auto gradient = [model](const Vec& x) { return model.gradient(x); };
  auto hessian = [model](const Vec&) { return model.hessian(); };
  return Objective("quadratic", model.dimension(), value, gradient, hessian);
}

Objective builtin(std::string_view name) {
  if (name == "six_hump_camel") return six_hump_camel();
  if (name == "tightness2d") return tightness2d();
  throw Error(ErrorCode::UnknownFunction, "unknown builtin '" + std::string(name) + "'");
}

}  // namespace mtnpass
