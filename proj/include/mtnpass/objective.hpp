#pragma once

#include "mtnpass/types.hpp"

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

namespace mtnpass {

struct EvalCounts {
  std::uint64_t value = 0;
  std::uint64_t gradient = 0;
  std::uint64_t hessian = 0;
};

/// A smooth function f: R^n -> R with value, gradient and Hessian evaluators.
///
/// When no analytic Hessian is supplied, hessian() falls back to central
/// differences of the gradient. Every returned Hessian is symmetrized.
/// Non-finite results raise ErrorCode::EvaluationError.
///
/// Copies share their evaluation counters.
class Objective {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradientFn = std::function<Vec(const Vec&)>;
  using HessianFn = std::function<Mat(const Vec&)>;

  Objective(std::string name, int dimension, ValueFn value, GradientFn gradient,
            HessianFn hessian = {});

  const std::string& name() const noexcept { return name_; }
  int dimension() const noexcept { return dimension_; }
  bool has_analytic_hessian() const noexcept { return static_cast<bool>(hessian_); }

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  Mat hessian(const Vec& x) const;

  EvalCounts counts() const noexcept;
  void reset_counts() const noexcept;

  /// Same function with the analytic Hessian dropped (forces the FD fallback).
  Objective without_analytic_hessian() const;

 private:
  struct Counters {
    std::atomic<std::uint64_t> value{0};
    std::atomic<std::uint64_t> gradient{0};
    std::atomic<std::uint64_t> hessian{0};
  };

  void check_point(const Vec& x) const;

  std::string name_;
  int dimension_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
  std::shared_ptr<Counters> counters_;
};

/// Euclidean ball standing in for the neighborhood U' on which the level-set
/// machinery is allowed to operate.
struct TrustRegion {
  Vec center;
  double radius = 10.0;

  TrustRegion() = default;
  TrustRegion(Vec c, double r);

  bool contains(const Vec& x) const;

  /// Parameter interval [lo, hi] of the chord {x + t v} inside the ball.
  /// Throws InvalidArgument when the line misses the ball.
  std::pair<double, double> chord(const Vec& x, const Vec& v) const;
};

// Central-difference derivatives. Steps follow the library-wide convention:
// gradient h = 1e-6 max(1, |x|_inf), Hessian h = 1e-4 max(1, |x|_inf).
Vec fd_gradient(const Objective& obj, const Vec& x);
Mat fd_hessian(const Objective& obj, const Vec& x);

Objective six_hump_camel();
Objective tightness2d();

class QuadraticModel;
Objective quadratic_objective(const QuadraticModel& model);

/// Builtin lookup by name: "six_hump_camel" or "tightness2d".
/// Quadratics are built from a model via quadratic_objective().
Objective builtin(std::string_view name);

}  // namespace mtnpass
