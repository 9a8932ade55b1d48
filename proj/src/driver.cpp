#include "mtnpass/driver.hpp"

#include "mtnpass/line1d.hpp"
#include "mtnpass/pardist.hpp"
#include "mtnpass/quadmodel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

namespace mtnpass {

void SolveConfig::validate() const {
  const std::array<std::pair<const char*, double>, 8> positive{{{"gtol", gtol},
                                                               {"xtol", xtol},
                                                               {"hull_tol", hull_tol},
                                                               {"eta", eta},
                                                               {"radius", radius},
                                                               {"newton_handoff_gap", newton_handoff_gap},
                                                               {"root_tol", root_tol},
                                                               {"denom_tol", denom_tol}}};
  for (const auto& [name, value] : positive) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be positive");
    }
  }
  if (!(eta < 1.0)) throw Error(ErrorCode::InvalidArgument, "eta must be below 1");
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
}

StepOptions SolveConfig::step_options() const {
  StepOptions opts;
  opts.pardist.line.root_tol = root_tol;
  opts.pardist.denom_rel = denom_tol;
  return opts;
}

const char* to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::SaddleFound: return "SaddleFound";
    case SolveStatus::Stalled: return "Stalled";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::Breakdown: return "Breakdown";
  }
  return "Unknown";
}

double hull_distance(const Vec& g1, const Vec& g2) {
  const Vec d = g2 - g1;
  const double dd = d.squaredNorm();
  const double t = dd > 0.0 ? std::clamp(-g1.dot(d) / dd, 0.0, 1.0) : 0.0;
  return (g1 + t * d).norm();
}

namespace {

constexpr int kBracketSamples = 64;

// Interior maximizer of f on the segment b + t v, t in [0, len].
std::optional<LineExtremum> interior_line_max(const Objective& obj, const Vec& b, const Vec& v, double len,
                                              const LineTolerances& tol) {
  const double spacing = len / kBracketSamples;
  int best = 0;
  double best_value = obj.value(b);
  const double fb = best_value;
  for (int i = 1; i <= kBracketSamples; ++i) {
    const double fi = obj.value(b + (i * spacing) * v);
    if (fi > best_value) {
      best = i;
      best_value = fi;
    }
  }
  const double fa = obj.value(b + len * v);
  if (best == 0 || best == kBracketSamples || best_value <= std::max(fa, fb)) return std::nullopt;
  const Vec start = b + (best * spacing) * v;
  const TrustRegion local(start, 2.0 * spacing);
  LineExtremum m = line_local_max(obj, start, v, local, tol);
  m.t += best * spacing;
  return m;
}

double endpoint_slope(const Objective& obj, const Vec& p, const Vec& v) { return obj.gradient(p).dot(v); }

}  // namespace

SolverState init_state(const Objective& obj, const Vec& a, const Vec& b, const SolveConfig& config) {
  config.validate();
  const int n = obj.dimension();
  if (a.size() != n || b.size() != n) throw Error(ErrorCode::InvalidArgument, "endpoint dimension mismatch");
  const Vec diff = a - b;
  const double len = diff.norm();
  if (!(len > 0.0)) throw Error(ErrorCode::BadEndpoints, "endpoints coincide");
  if (2.0 * config.radius < len) throw Error(ErrorCode::BadEndpoints, "trust region does not contain both endpoints");
  const Vec v = diff / len;
  const TrustRegion region(0.5 * (a + b), config.radius);
  const StepOptions opts = config.step_options();

  const auto peak = interior_line_max(obj, b, v, len, opts.pardist.line);
  if (!peak) throw Error(ErrorCode::BadEndpoints, "f has no interior maximum on [a, b]");
  const Vec m = b + peak->t * v;
  const double fm = peak->value;

  // Lift l0 while an endpoint crossing is nearly tangential or missing.
  double level = std::max(obj.value(a), obj.value(b));
  for (int lift = 0;; ++lift) {
    const double gap = fm - level;
    try {
      const LineSection section = find_level_crossings(obj, m, v, level, region, opts.pardist.line);
      const double hi_avg = gap / std::max(section.t_hi, 1e-300);
      const double lo_avg = gap / std::max(-section.t_lo, 1e-300);
      const bool transversal = std::abs(endpoint_slope(obj, section.z(), v)) >= 0.1 * hi_avg &&
                               std::abs(endpoint_slope(obj, section.z_prime(), v)) >= 0.1 * lo_avg;
      if (transversal || lift == 20) return state_from_section(section, region, StepKind::Init, 0);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CrossingOutsideRegion || lift == 20) throw;
    }
    level += 0.1 * gap;
  }
}

namespace {

class Run {
 public:
  Run(const Objective& obj, const SolveConfig& config)
      : obj_(obj), config_(config), opts_(config.step_options()), start_counts_(obj.counts()) {}

  SolveReport execute(const Vec& a, const Vec& b) {
    state_ = init_state(obj_, a, b, config_);
    record(StepKind::Init);

    int failures = 0;
    int stalls = 0;
    for (int it = 1; it <= config_.max_iter; ++it) {
      report_.iterations = it - 1;
      if (check_stopping()) return finish();
      try {
        iterate();
        failures = stalls = 0;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::CriticalCandidate && finalize(state_.midpoint())) return finish();
        if (recover()) {
          failures = stalls = 0;
          continue;
        }
        report_.message = e.what();
        if (e.code() == ErrorCode::LUpImpossible || e.code() == ErrorCode::AvStalled) {
          if (++stalls >= 3) return finish(SolveStatus::Stalled);
        } else if (++failures >= 3) {
          return finish(SolveStatus::Breakdown);
        }
      }
    }
    report_.iterations = config_.max_iter;
    if (check_stopping()) return finish();
    return finish(SolveStatus::MaxIter);
  }

 private:
  void record(StepKind kind) {
    grad_z_ = obj_.gradient(state_.z);
    grad_zp_ = obj_.gradient(state_.z_prime);
    TraceRecord r;
    r.iteration = static_cast<int>(report_.trace.size());
    r.kind = kind;
    r.level = state_.level;
    r.g = state_.gap();
    r.gap = state_.gap();
    r.grad_norm_z = grad_z_.norm();
    r.grad_norm_zp = grad_zp_.norm();
    r.x = state_.midpoint();
    report_.trace.push_back(std::move(r));
  }

  // Newton polish from p; accepted only at a Morse-1 point inside the region.
  bool finalize(const Vec& p) {
    try {
      const NewtonResult nr = newton_refine(obj_, p, state_.region, config_.gtol, 50);
      if (nr.status != NewtonStatus::Converged || nr.morse_index != 1) return false;
      report_.status = SolveStatus::SaddleFound;
      report_.x = nr.x;
      report_.morse_index = nr.morse_index;
      if (nr.iterations > 0) {
        TraceRecord r = report_.trace.back();
        r.iteration = static_cast<int>(report_.trace.size());
        r.kind = StepKind::Newton;
        r.x = nr.x;
        r.g = 0.0;
        r.gap = 0.0;
        r.level = obj_.value(nr.x);
        r.grad_norm_z = r.grad_norm_zp = nr.grad_norm;
        report_.trace.push_back(std::move(r));
      }
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  bool check_stopping() {
    const Vec mid = state_.midpoint();
    const Vec grad_mid = obj_.gradient(mid);
    const std::array<std::pair<const Vec*, double>, 3> points{
        {{&state_.z, grad_z_.norm()}, {&state_.z_prime, grad_zp_.norm()}, {&mid, grad_mid.norm()}}};
    for (const auto& [p, gn] : points) {
      if (gn <= config_.gtol && finalize(*p)) return true;
    }
    const double gap = state_.gap();
    if (gap <= config_.xtol && hull_distance(grad_z_, grad_zp_) <= config_.hull_tol) {
      Vec best = state_.z_prime;
      double best_norm = grad_zp_.norm();
      for (int k = 1; k <= 10; ++k) {
        const Vec p = state_.z_prime + (k / 10.0) * (state_.z - state_.z_prime);
        const double gn = obj_.gradient(p).norm();
        if (gn < best_norm) {
          best = p;
          best_norm = gn;
        }
      }
      if (finalize(best)) return true;
    }
    if (gap < config_.newton_handoff_gap && finalize(mid)) return true;
    return false;
  }

  std::optional<double> level_target() {
    if (config_.level_policy != LevelPolicy::QuadraticEstimate) return std::nullopt;
    try {
      const Vec mid = state_.midpoint();
      const Mat h = obj_.hessian(mid);
      const Vec g = obj_.gradient(mid) - h * mid;
      const double c = obj_.value(mid) - 0.5 * mid.dot(h * mid) - g.dot(mid);
      return estimate_critical_level(QuadraticModel(h, g, c), state_.v);
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  void raise_level() {
    state_ = step_l_up(state_, obj_, opts_, level_target());
    record(StepKind::LUp);
  }

  void lower_level(const Vec& line_max) {
    const LDownOutcome down = step_l_down(line_max, state_.v, obj_, state_.region, opts_);
    state_ = state_from_section(down.section, state_.region, StepKind::LDown, state_.iteration + 1);
    record(StepKind::LDown);
  }

  void iterate() {
    const PdOutcome pd = step_pd(state_, obj_, opts_);
    switch (pd.result) {
      case PdResult::ReducedSegment:
        state_ = pd.state;
        record(StepKind::PD);
        if (pd.g_after <= (1.0 - config_.eta) * pd.g_before) {
          try {
            state_ = step_av(state_, obj_, opts_);
            record(StepKind::Av);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::AvStalled) throw;
          }
          return;
        }
        raise_level();
        return;
      case PdResult::HitZero:
        lower_level(*pd.line_max);
        return;
      case PdResult::Stalled:
        raise_level();
        return;
    }
  }

  // Fallbacks after a failed iteration: adjust v, then raise the level.
  bool recover() {
    try {
      state_ = step_av(state_, obj_, opts_);
      record(StepKind::Av);
      return true;
    } catch (const Error&) {
    }
    try {
      raise_level();
      return true;
    } catch (const Error&) {
    }
    return false;
  }

  SolveReport finish(std::optional<SolveStatus> status = std::nullopt) {
    if (status) report_.status = *status;
    if (report_.status != SolveStatus::SaddleFound) {
      report_.x = state_.midpoint();
      report_.morse_index = morse_index(decompose(obj_.hessian(report_.x)).values);
    }
    report_.f = obj_.value(report_.x);
    report_.grad_norm = obj_.gradient(report_.x).norm();
    const EvalCounts now = obj_.counts();
    report_.evals = {now.value - start_counts_.value, now.gradient - start_counts_.gradient,
                     now.hessian - start_counts_.hessian};
    return std::move(report_);
  }

  const Objective& obj_;
  const SolveConfig& config_;
  StepOptions opts_;
  EvalCounts start_counts_;
  SolverState state_;
  Vec grad_z_;
  Vec grad_zp_;
  SolveReport report_;
};

}  // namespace

SolveReport solve(const Objective& obj, const Vec& a, const Vec& b, const SolveConfig& config) {
  Run run(obj, config);
  return run.execute(a, b);
}

}  // namespace mtnpass
