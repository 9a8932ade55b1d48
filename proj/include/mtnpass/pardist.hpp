#pragma once

#include "mtnpass/line1d.hpp"
#include "mtnpass/objective.hpp"
#include "mtnpass/quadmodel.hpp"
#include "mtnpass/types.hpp"

#include <optional>

namespace mtnpass {

struct PardistOptions {
  LineTolerances line;
  /// |v^T grad f(z)| must exceed denom_rel * |grad f(z)| (same for z').
  double denom_rel = 1e-8;
  bool want_hessian = false;
};

/// Parallel distance g_{l,v}(x) = diam S_{l,v}(x) with derivatives of g and g^2
/// assembled from endpoint gradients and Hessians.
///
/// Derivatives are present only for a segment of positive length. For such a
/// segment with endpoint gradients a = grad f(z), b = grad f(z'):
///   grad g   = -a / (v^T a) + b / (v^T b)
///   grad g^2 = 2 g grad g
///   hess g^2 = 2 grad g grad g^T
///              - 2 g P_a hess f(z)  P_a^T / (v^T a)
///              + 2 g P_b hess f(z') P_b^T / (v^T b),   P_a = I - a v^T / (v^T a).
struct ParallelDistanceEval {
  LineSection section;
  double g = 0.0;
  double g2 = 0.0;
  std::optional<Vec> grad_g;
  std::optional<Vec> grad_g2;
  std::optional<Mat> hess_g2;
  Vec grad_f_z;
  Vec grad_f_zp;
  double denom_z = 0.0;   // v^T grad f(z)
  double denom_zp = 0.0;  // v^T grad f(z')

  bool has_derivatives() const noexcept { return grad_g2.has_value(); }
};

/// Throws DegenerateDenominator when v is nearly tangent to the level set at
/// an endpoint; NoLineMax / CrossingOutsideRegion from the line search.
ParallelDistanceEval eval_pardist(const Objective& obj, const Vec& x, const Vec& v, double level,
                                  const TrustRegion& region, const PardistOptions& opts = {});

/// Value of g^2 only (no endpoint gradients).
double pardist_squared(const Objective& obj, const Vec& x, const Vec& v, double level,
                       const TrustRegion& region, const LineTolerances& tol = {});

struct ClosedFormG2 {
  double g2 = 0.0;
  Vec gradient;
  Mat hessian;
  bool positive_branch = false;
};

/// Exact g^2 for a quadratic with v^T H v < 0:
///   g^2 = max{0, 4/(v^T H v)^2 [x^T M x + 2 b^T x + k]}
///   M = H v v^T H - (v^T H v) H,  b = (g^T v) H v - (v^T H v) g,
///   k = (g^T v)^2 + (v^T H v)(2l - 2c).
/// Gradient and Hessian are zero off the positive branch.
/// Throws NotConcaveAlongV.
ClosedFormG2 closed_form_g2_quadratic(const QuadraticModel& model, const Vec& x, const Vec& v,
                                      double level);

/// Hessian of the closed form on its positive branch (independent of x and l).
Mat closed_form_g2_hessian(const Mat& h, const Vec& v);

/// Level l at which min_x of the closed-form bracket is exactly zero.
/// Throws NoEstimate when the bracket is unbounded below in x.
double estimate_critical_level(const QuadraticModel& model, const Vec& v);

}  // namespace mtnpass
