#include "mtnpass/pardist.hpp"

#include <cmath>

namespace mtnpass {
namespace {

// P H P^T / denom with P = I - a v^T / denom.
Mat projected_curvature(const Mat& h, const Vec& a, const Vec& v, double denom) {
  const Eigen::Index n = v.size();
  const Mat p = Mat::Identity(n, n) - (a * v.transpose()) / denom;
  return p * h * p.transpose() / denom;
}

}  // namespace

ParallelDistanceEval eval_pardist(const Objective& obj, const Vec& x, const Vec& v, double level,
                                  const TrustRegion& region, const PardistOptions& opts) {
  ParallelDistanceEval out;
  out.section = find_level_crossings(obj, x, v, level, region, opts.line);
  out.g = out.section.diameter();
  out.g2 = out.g * out.g;
  if (!out.section.is_segment() || out.g <= 0.0) return out;

  const Vec z = out.section.z();
  const Vec zp = out.section.z_prime();
  out.grad_f_z = obj.gradient(z);
  out.grad_f_zp = obj.gradient(zp);
  out.denom_z = v.dot(out.grad_f_z);
  out.denom_zp = v.dot(out.grad_f_zp);

  const double nz = out.grad_f_z.norm();
  const double nzp = out.grad_f_zp.norm();
  if (!(std::abs(out.denom_z) > opts.denom_rel * nz) || nz == 0.0) {
    throw Error(ErrorCode::DegenerateDenominator, "v is tangent to the level set at z");
  }
  if (!(std::abs(out.denom_zp) > opts.denom_rel * nzp) || nzp == 0.0) {
    throw Error(ErrorCode::DegenerateDenominator, "v is tangent to the level set at z'");
  }

  const Vec grad_g = -out.grad_f_z / out.denom_z + out.grad_f_zp / out.denom_zp;
  out.grad_g = grad_g;
  out.grad_g2 = 2.0 * out.g * grad_g;

  if (opts.want_hessian) {
    const Mat hz = obj.hessian(z);
    const Mat hzp = obj.hessian(zp);
    Mat h2 = 2.0 * grad_g * grad_g.transpose() -
             2.0 * out.g * projected_curvature(hz, out.grad_f_z, v, out.denom_z) +
             2.0 * out.g * projected_curvature(hzp, out.grad_f_zp, v, out.denom_zp);
    out.hess_g2 = 0.5 * (h2 + h2.transpose());
  }
  return out;
}

double pardist_squared(const Objective& obj, const Vec& x, const Vec& v, double level,
                       const TrustRegion& region, const LineTolerances& tol) {
  const double g = find_level_crossings(obj, x, v, level, region, tol).diameter();
  return g * g;
}

Mat closed_form_g2_hessian(const Mat& h, const Vec& v) {
  const double vhv = v.dot(h * v);
  const Vec hv = h * v;
  const Mat m = hv * hv.transpose() - vhv * h;
  return 8.0 / (vhv * vhv) * m;
}

ClosedFormG2 closed_form_g2_quadratic(const QuadraticModel& model, const Vec& x, const Vec& v,
                                      double level) {
  const Mat& h = model.hessian();
  const Vec& g = model.linear();
  const double c = model.constant();
  const Vec hv = h * v;
  const double vhv = v.dot(hv);
  if (!(vhv < 0.0)) throw Error(ErrorCode::NotConcaveAlongV, "v^T H v must be negative");

  const double gv = g.dot(v);
  const Mat m = hv * hv.transpose() - vhv * h;
  const Vec b = gv * hv - vhv * g;
  const double k = gv * gv + vhv * (2.0 * level - 2.0 * c);
  const double scale = 4.0 / (vhv * vhv);
  const double bracket = x.dot(m * x) + 2.0 * b.dot(x) + k;

  ClosedFormG2 out;
  const Eigen::Index n = x.size();
  if (bracket > 0.0) {
    out.positive_branch = true;
    out.g2 = scale * bracket;
    out.gradient = scale * (2.0 * (m * x) + 2.0 * b);
    out.hessian = 2.0 * scale * m;
  } else {
    out.gradient = Vec::Zero(n);
    out.hessian = Mat::Zero(n, n);
  }
  return out;
}

double estimate_critical_level(const QuadraticModel& model, const Vec& v) {
  const Mat& h = model.hessian();
  const Vec& g = model.linear();
  const Vec hv = h * v;
  const double vhv = v.dot(hv);
  if (!(vhv < 0.0)) throw Error(ErrorCode::NotConcaveAlongV, "v^T H v must be negative");

  const double gv = g.dot(v);
  const Mat m = hv * hv.transpose() - vhv * h;
  const Vec b = gv * hv - vhv * g;

  // min_x x^T M x + 2 b^T x = -b^T M^+ b, finite iff M is PSD and b lies in range(M).
  const SpectralDecomposition eig = decompose(m);
  const double scale = std::max(eig.values.cwiseAbs().maxCoeff(), 1e-300);
  const double zero = 1e-10 * scale;
  double quad_min = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double lambda = eig.values(i);
    const double proj = eig.vectors.col(i).dot(b);
    if (lambda < -zero) throw Error(ErrorCode::NoEstimate, "bracket is not convex on v-perp");
    if (lambda <= zero) {
      if (std::abs(proj) > 1e-8 * std::max(1.0, b.norm())) {
        throw Error(ErrorCode::NoEstimate, "bracket is unbounded below along its kernel");
      }
      continue;
    }
    quad_min -= proj * proj / lambda;
  }
  // quad_min + gv^2 + vhv (2l - 2c) = 0
  return model.constant() - (quad_min + gv * gv) / (2.0 * vhv);
}

}  // namespace mtnpass
