#pragma once

#include "mtnpass/objective.hpp"
#include "mtnpass/subroutines.hpp"
#include "mtnpass/types.hpp"

#include <cstdint>
#include <vector>

namespace mtnpass {

enum class LevelPolicy {
  Midpoint,           // l <- f(midpoint) on case 1(b)
  QuadraticEstimate,  // l <- estimate from a local quadratic model, capped by f(midpoint)
};

struct SolveConfig {
  double gtol = 1e-8;
  double xtol = 1e-6;
  double hull_tol = 1e-6;
  double eta = 0.05;
  int max_iter = 500;
  double radius = 10.0;
  double newton_handoff_gap = 1e-2;
  double root_tol = 1e-10;
  double denom_tol = 1e-8;
  std::uint64_t seed = 0;
  LevelPolicy level_policy = LevelPolicy::Midpoint;

  /// Throws InvalidArgument on non-positive tolerances or max_iter < 1.
  void validate() const;
  StepOptions step_options() const;
};

enum class SolveStatus { SaddleFound, Stalled, MaxIter, Breakdown };

const char* to_string(SolveStatus status) noexcept;

struct TraceRecord {
  int iteration = 0;
  StepKind kind = StepKind::Init;
  double level = 0.0;
  double g = 0.0;
  double gap = 0.0;
  double grad_norm_z = 0.0;
  double grad_norm_zp = 0.0;
  Vec x;
};

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIter;
  Vec x;
  double f = 0.0;
  double grad_norm = 0.0;
  int morse_index = -1;
  int iterations = 0;
  EvalCounts evals;
  std::vector<TraceRecord> trace;
  std::string message;
};

/// Distance from the origin to the segment [g1, g2].
double hull_distance(const Vec& g1, const Vec& g2);

/// Initial iterate between a and b: v0 = (a - b)/|a - b|, line max m on [a, b],
/// l0 = max(f(a), f(b)) and the crossings of l0 along v0 through m. When an
/// endpoint crossing is nearly tangential (e.g. a or b is a minimizer) l0 is
/// lifted toward f(m) until both crossings are transversal.
/// The region is centered at the midpoint of [a, b]. Throws BadEndpoints.
SolverState init_state(const Objective& obj, const Vec& a, const Vec& b, const SolveConfig& config);

SolveReport solve(const Objective& obj, const Vec& a, const Vec& b, const SolveConfig& config = {});

}  // namespace mtnpass
