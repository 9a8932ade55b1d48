#include "mtnpass/verify.hpp"

#include "mtnpass/quadmodel.hpp"
#include "mtnpass/subroutines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mtnpass {
namespace {

Vec random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec u(n);
  do {
    for (int i = 0; i < n; ++i) u(i) = normal(rng);
  } while (u.norm() == 0.0);
  return u.normalized();
}

Vec random_in_ball(int n, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vec u = random_unit(n, rng);
  return radius * std::pow(unit(rng), 1.0 / n) * u;
}

double spectral_norm(const Mat& m) { return decompose(m).values.cwiseAbs().maxCoeff(); }

struct FdG2 {
  Vec gradient;
  Mat hessian;
};

FdG2 fd_of_g2(const Objective& obj, const GradSample& s, const TrustRegion& region, double hg, double hh) {
  const Eigen::Index n = s.x.size();
  auto g2 = [&](const Vec& y) { return pardist_squared(obj, y, s.v, s.level, region); };
  FdG2 out{Vec(n), Mat(n, n)};
  Vec y = s.x;
  for (Eigen::Index j = 0; j < n; ++j) {
    y(j) = s.x(j) + hg;
    const double fp = g2(y);
    y(j) = s.x(j) - hg;
    const double fm = g2(y);
    y(j) = s.x(j);
    out.gradient(j) = (fp - fm) / (2.0 * hg);
  }
  const double g0 = g2(s.x);
  for (Eigen::Index j = 0; j < n; ++j) {
    y = s.x;
    y(j) += hh;
    const double fp = g2(y);
    y(j) -= 2.0 * hh;
    const double fm = g2(y);
    out.hessian(j, j) = (fp - 2.0 * g0 + fm) / (hh * hh);
    for (Eigen::Index k = j + 1; k < n; ++k) {
      auto at = [&](double sj, double sk) {
        Vec p = s.x;
        p(j) += sj * hh;
        p(k) += sk * hh;
        return g2(p);
      };
      const double mixed = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hh * hh);
      out.hessian(j, k) = out.hessian(k, j) = mixed;
    }
  }
  return out;
}

}  // namespace

double relative_error(const Eigen::Ref<const Mat>& analytic, const Eigen::Ref<const Mat>& reference) {
  const double diff = (analytic - reference).lpNorm<Eigen::Infinity>();
  return diff / std::max(1.0, analytic.lpNorm<Eigen::Infinity>());
}

GradCheckReport check_grad_formulas(const Objective& obj, const std::vector<GradSample>& samples,
                                    const GradCheckTolerances& tol) {
  GradCheckReport report;
  PardistOptions opts;
  opts.want_hessian = true;
  for (const GradSample& s : samples) {
    const TrustRegion region(s.x, tol.region_radius);
    ParallelDistanceEval e;
    FdG2 fd;
    try {
      e = eval_pardist(obj, s.x, s.v, s.level, region, opts);
      if (!e.has_derivatives() || e.g <= tol.min_g || std::abs(e.denom_z) <= tol.min_denom ||
          std::abs(e.denom_zp) <= tol.min_denom) {
        ++report.skipped;
        continue;
      }
      fd = fd_of_g2(obj, s, region, tol.fd_step_gradient, tol.fd_step_hessian);
    } catch (const Error&) {
      ++report.skipped;
      continue;
    }
    GradCheckEntry entry;
    entry.sample = s;
    entry.rel_error_gradient = relative_error(*e.grad_g2, fd.gradient);
    entry.rel_error_hessian = relative_error(*e.hess_g2, fd.hessian);
    entry.passed = entry.rel_error_gradient < tol.max_rel_error && entry.rel_error_hessian < tol.max_rel_error;
    ++report.checked;
    if (!entry.passed) ++report.failed;
    report.max_rel_error_gradient = std::max(report.max_rel_error_gradient, entry.rel_error_gradient);
    report.max_rel_error_hessian = std::max(report.max_rel_error_hessian, entry.rel_error_hessian);
    report.entries.push_back(std::move(entry));
  }
  return report;
}

Vec perturb_direction(const Vec& v_bar, const Vec& w, double gap) {
  Vec perp = w - v_bar * v_bar.dot(w);
  const double pn = perp.norm();
  if (pn == 0.0) throw Error(ErrorCode::InvalidArgument, "perturbation must not be parallel to v");
  perp /= pn;
  const double theta = 2.0 * std::asin(gap / 2.0);
  return std::cos(theta) * v_bar + std::sin(theta) * perp;
}

std::vector<GradSample> sample_near_saddle(const Vec& x_bar, const Vec& v_bar, double f_bar, int count,
                                           std::mt19937_64& rng, const SampleSpec& spec) {
  const int n = static_cast<int>(x_bar.size());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<GradSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    GradSample s;
    s.x = x_bar + random_in_ball(n, spec.x_spread, rng);
    s.v = n > 1 ? perturb_direction(v_bar, random_unit(n, rng), spec.v_spread * unit(rng)) : v_bar;
    s.level = f_bar - (spec.level_lo + (spec.level_hi - spec.level_lo) * unit(rng));
    out.push_back(std::move(s));
  }
  return out;
}

StabilityReport check_hessian_stability(const Objective& obj, const Vec& x_bar, const StabilityScales& scales) {
  StabilityReport report;
  const int n = obj.dimension();
  const double f_bar = obj.value(x_bar);
  const Vec grad = obj.gradient(x_bar);
  const Mat h = obj.hessian(x_bar);
  const SpectralDecomposition eig = decompose(h);
  const double lam_max = eig.values.cwiseAbs().maxCoeff();

  if (grad.norm() > 1e-6 * (1.0 + std::abs(f_bar))) {
    report.reason = "point is not critical";
    return report;
  }
  if (n < 2 || morse_index(eig.values) != 1 || eig.values.cwiseAbs().minCoeff() <= 1e-8 * lam_max) {
    report.reason = "critical point is not a nondegenerate saddle of Morse index one";
    return report;
  }
  report.applicable = true;

  std::mt19937_64 rng(scales.seed);
  const Vec v_bar = eig.vectors.col(n - 1);
  const double lambda_n = eig.values(n - 1);
  const Vec u = random_unit(n, rng);
  const Vec v_pert = perturb_direction(v_bar, random_unit(n, rng), scales.perturbed_gap);
  const double e0 = scales.e0_factor * std::abs(lambda_n);
  const TrustRegion region(x_bar, 10.0);
  PardistOptions opts;
  opts.want_hessian = true;

  auto sweep = [&](const Vec& v) {
    std::vector<QuadraticComparison> rows;
    const Mat h_ref = closed_form_g2_hessian(h, v);
    const double ref_norm = spectral_norm(h_ref);
    for (int k = 1; k <= scales.levels; ++k) {
      QuadraticComparison row;
      row.scale = std::ldexp(1.0, -k);
      const Vec x = x_bar + row.scale * scales.r0 * u;
      const double level = f_bar - row.scale * e0;
      row.offset = (x - x_bar).norm();
      row.level_gap = f_bar - level;
      row.vector_gap = (v - v_bar).norm();
      row.ref_norm = ref_norm;
      try {
        const ParallelDistanceEval e = eval_pardist(obj, x, v, level, region, opts);
        row.deviation = e.hess_g2 ? spectral_norm(*e.hess_g2 - h_ref) : std::numeric_limits<double>::infinity();
      } catch (const Error&) {
        row.deviation = std::numeric_limits<double>::infinity();
      }
      rows.push_back(row);
    }
    return rows;
  };
  report.along_v_bar = sweep(v_bar);
  report.along_perturbed = sweep(v_pert);

  // Deviations at roundoff level (exact quadratics) are exempt from the ratio test.
  auto trend = [&](const std::vector<QuadraticComparison>& rows) {
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
      const double floor = 1e-9 * rows[k].ref_norm;
      if (!(rows[k + 1].deviation <= scales.trend_factor * rows[k].deviation + floor)) return false;
    }
    return true;
  };
  auto final_small = [&](const std::vector<QuadraticComparison>& rows) {
    return !rows.empty() && rows.back().deviation < scales.final_rel_tol * rows.back().ref_norm;
  };
  report.trend_ok = trend(report.along_v_bar) && trend(report.along_perturbed);
  report.final_ok = final_small(report.along_v_bar) && final_small(report.along_perturbed);
  return report;
}

namespace {

// g or g^2 at x; +inf when the section leaves the region.
double convexity_value(const Objective& obj, const Vec& x, const Vec& v, double level, const TrustRegion& region,
                       ConvexityTarget target, int& unbounded) {
  try {
    const double g2 = pardist_squared(obj, x, v, level, region);
    return target == ConvexityTarget::Distance ? std::sqrt(g2) : g2;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CrossingOutsideRegion && e.code() != ErrorCode::NoLineMax) throw;
    ++unbounded;
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

ConvexityReport check_convexity_region(const Objective& obj, const Vec& x_bar, double level, const Vec& v,
                                       double radius, int n_pairs, std::uint64_t seed, double slack,
                                       ConvexityTarget target) {
  ConvexityReport report;
  const int n = obj.dimension();
  std::mt19937_64 rng(seed);
  const TrustRegion region(x_bar, 10.0);
  const Mat basis = n > 1 ? orthogonal_complement(v) : Mat(n, 0);
  PardistOptions opts;
  opts.want_hessian = true;
  report.min_reduced_eigenvalue = std::numeric_limits<double>::infinity();

  for (int i = 0; i < n_pairs; ++i) {
    const Vec a = x_bar + random_in_ball(n, radius, rng);
    const Vec b = x_bar + random_in_ball(n, radius, rng);
    ++report.pairs;
    try {
      const double ga = convexity_value(obj, a, v, level, region, target, report.unbounded_points);
      const double gb = convexity_value(obj, b, v, level, region, target, report.unbounded_points);
      const double gm = convexity_value(obj, 0.5 * (a + b), v, level, region, target, report.unbounded_points);
      const double rhs = 0.5 * (ga + gb);
      if (std::isfinite(rhs) && gm - rhs > slack) {
        ++report.violations;
        if (std::isfinite(gm)) report.max_violation = std::max(report.max_violation, gm - rhs);
      }
    } catch (const Error&) {
      ++report.violations;
      ++report.eval_failures;
      continue;
    }
    if (basis.cols() == 0) continue;
    try {
      const ParallelDistanceEval e = eval_pardist(obj, a, v, level, region, opts);
      if (e.hess_g2) {
        const Mat reduced = basis.transpose() * (*e.hess_g2) * basis;
        report.min_reduced_eigenvalue = std::min(report.min_reduced_eigenvalue, decompose(reduced).values.minCoeff());
        ++report.eigen_points;
      }
    } catch (const Error&) {
    }
  }
  if (report.eigen_points == 0) report.min_reduced_eigenvalue = 0.0;
  return report;
}

std::vector<ShrinkageRow> convexity_radius_probe(const Objective& obj, const Vec& x_bar, const Vec& v,
                                                 const std::vector<double>& levels, int n_pairs,
                                                 std::uint64_t seed, ConvexityTarget target) {
  constexpr int kRadii = 80;
  constexpr double kLargest = 1.0;
  constexpr double kRatio = 0.92;
  std::vector<ShrinkageRow> rows;
  for (double level : levels) {
    ShrinkageRow row{level, 0.0};
    for (int k = kRadii - 1; k >= 0; --k) {
      const double r = kLargest * std::pow(kRatio, k);
      const ConvexityReport rep = check_convexity_region(obj, x_bar, level, v, r, n_pairs, seed + static_cast<std::uint64_t>(k), 1e-10, target);
      if (rep.violations > 0) break;
      row.radius = r;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mtnpass
