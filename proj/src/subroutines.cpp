#include "mtnpass/subroutines.hpp"

#include "mtnpass/quadmodel.hpp"

#include <cmath>
#include <optional>

namespace mtnpass {

const char* to_string(StepKind kind) noexcept {
  switch (kind) {
    case StepKind::Init: return "Init";
    case StepKind::PD: return "PD";
    case StepKind::Av: return "Av";
    case StepKind::LUp: return "LUp";
    case StepKind::LDown: return "LDown";
    case StepKind::Newton: return "Newton";
  }
  return "Unknown";
}

double level_residual(const Objective& obj, const SolverState& state) {
  return std::max(std::abs(obj.value(state.z) - state.level),
                  std::abs(obj.value(state.z_prime) - state.level));
}

SolverState state_from_section(const LineSection& section, const TrustRegion& region, StepKind kind,
                               int iteration) {
  SolverState s{section.z(), section.z_prime(), section.direction, section.level, Vec(),
                iteration,   region,           kind};
  s.x = s.midpoint();
  return s;
}

Mat orthogonal_complement(const Vec& v) {
  const Eigen::Index n = v.size();
  const Mat vm = v;
  Eigen::HouseholderQR<Mat> qr(vm);
  const Mat q = qr.householderQ() * Mat::Identity(n, n);
  return q.rightCols(n - 1);
}

PdOutcome step_pd(const SolverState& state, const Objective& obj, const StepOptions& opts) {
  PdOutcome out;
  out.state = state;
  const Vec x = state.midpoint();
  const Vec& v = state.v;

  PardistOptions popts = opts.pardist;
  popts.want_hessian = opts.use_newton;
  const ParallelDistanceEval here = eval_pardist(obj, x, v, state.level, state.region, popts);
  out.g_before = here.g;
  if (!here.has_derivatives()) {
    out.result = PdResult::HitZero;
    out.line_max = here.section.peak_point();
    return out;
  }

  const Vec& grad = *here.grad_g2;
  Vec d;
  double t0 = 1.0;
  if (opts.use_newton && here.hess_g2 && v.size() > 1) {
    const Mat basis = orthogonal_complement(v);
    const Mat reduced = basis.transpose() * (*here.hess_g2) * basis;
    if (decompose(reduced).values.minCoeff() > opts.newton_min_eig) {
      d = -basis * reduced.ldlt().solve(basis.transpose() * grad);
      out.used_newton = true;
    }
  }
  if (!out.used_newton) {
    d = -(grad - v * v.dot(grad));
    const double len = d.norm();
    if (len > 0.0) t0 = std::min(1.0, state.region.radius / len);
  }
  const double slope = grad.dot(d);
  if (!(d.norm() > 0.0) || !(slope < 0.0)) {
    out.g_after = here.g;
    return out;
  }

  const double g2_here = here.g2;
  double t = t0;
  for (int k = 0; k <= opts.max_backtracks; ++k, t *= opts.backtrack) {
    const Vec y = x + t * d;
    if (!state.region.contains(y)) continue;
    LineSection section;
    try {
      section = find_level_crossings(obj, y, v, state.level, state.region, opts.pardist.line);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoLineMax || e.code() == ErrorCode::CrossingOutsideRegion) continue;
      throw;
    }
    const double g_new = section.diameter();
    if (g_new <= 0.0) {
      out.result = PdResult::HitZero;
      out.line_max = section.peak_point();
      out.g_after = 0.0;
      return out;
    }
    if (g_new * g_new <= g2_here + opts.armijo_c1 * t * slope) {
      out.result = PdResult::ReducedSegment;
      out.state = state_from_section(section, state.region, StepKind::PD, state.iteration + 1);
      out.g_after = g_new;
      return out;
    }
  }
  out.g_after = here.g;
  return out;
}

namespace {

// Moves p along grad f(p) until f = level, by Newton in the step length.
std::optional<Vec> project_to_level(const Objective& obj, const Vec& p, double level,
                                    const TrustRegion& region, double root_tol) {
  const Vec u = obj.gradient(p);
  const double un2 = u.squaredNorm();
  if (un2 == 0.0) return std::nullopt;
  double tau = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Vec y = p + tau * u;
    if (!region.contains(y)) return std::nullopt;
    const double r = obj.value(y) - level;
    if (std::abs(r) <= root_tol) return y;
    const double slope = obj.gradient(y).dot(u);
    if (slope == 0.0) return std::nullopt;
    tau -= r / slope;
  }
  return std::nullopt;
}

}  // namespace

SolverState step_av(const SolverState& state, const Objective& obj, const StepOptions& opts) {
  const Vec gz = obj.gradient(state.z);
  const Vec gzp = obj.gradient(state.z_prime);
  const bool move_z = gz.norm() >= gzp.norm();
  const Vec& p = move_z ? state.z : state.z_prime;
  const Vec& q = move_z ? state.z_prime : state.z;
  const Vec& gp = move_z ? gz : gzp;

  const double gp_norm = gp.norm();
  if (gp_norm == 0.0) throw Error(ErrorCode::AvStalled, "endpoint is a critical point");
  const Vec normal = gp / gp_norm;
  const Vec chord = q - p;
  const Vec w = chord - normal * normal.dot(chord);
  if (w.norm() < 1e-12) throw Error(ErrorCode::AvStalled, "chord is already normal to the level set");

  const double d0 = chord.norm();
  std::optional<Vec> best;
  double best_dist = d0;
  double s = 1.0;
  for (int k = 0; k <= opts.max_backtracks; ++k, s *= opts.backtrack) {
    const auto cand = project_to_level(obj, p + s * w, state.level, state.region, opts.pardist.line.root_tol);
    const double dist = cand ? (*cand - q).norm() : d0;
    if (cand && dist < best_dist) {
      best = cand;
      best_dist = dist;
    } else if (best) {
      break;
    }
  }
  if (!best) throw Error(ErrorCode::AvStalled, "no tangential move shortens |z - z'|");

  SolverState next = state;
  (move_z ? next.z : next.z_prime) = *best;
  next.v = (next.z - next.z_prime) / (next.z - next.z_prime).norm();
  next.x = next.midpoint();
  next.iteration = state.iteration + 1;
  next.last_step = StepKind::Av;
  return next;
}

LDownOutcome step_l_down(const Vec& x, const Vec& v, const Objective& obj, const TrustRegion& region,
                         const StepOptions& opts) {
  const Vec gx = obj.gradient(x);
  const double gnorm = gx.norm();
  const double along = gx.dot(v);
  if (std::abs(along) > 1e-6 * (1.0 + gnorm)) {
    throw Error(ErrorCode::InvalidArgument, "x is not a line-local maximum along v");
  }
  Vec d = -(gx - v * along);
  const double dn = d.norm();
  if (dn <= 1e-12 * (1.0 + gnorm)) {
    throw Error(ErrorCode::CriticalCandidate, "gradient is parallel to v at the line maximum");
  }
  d /= dn;

  const double fx = obj.value(x);
  const LineExtremum m = line_local_min(obj, x, d, region, opts.pardist.line);
  if (!(m.value < fx)) throw Error(ErrorCode::BadDirection, "level did not decrease");

  LDownOutcome out;
  out.level = m.value;
  out.x = x + m.t * d;
  out.section = find_level_crossings(obj, out.x, v, out.level, region, opts.pardist.line);
  return out;
}

SolverState step_l_up(const SolverState& state, const Objective& obj, const StepOptions& opts,
                      std::optional<double> target) {
  const Vec mid = state.midpoint();
  const double fm = obj.value(mid);
  if (!(fm > state.level)) throw Error(ErrorCode::LUpImpossible, "f(midpoint) does not exceed l");
  double level = fm;
  if (target && *target > state.level && *target < fm) level = *target;

  const LineSection section = find_level_crossings(obj, mid, state.v, level, state.region, opts.pardist.line);
  return state_from_section(section, state.region, StepKind::LUp, state.iteration + 1);
}

}  // namespace mtnpass
