#pragma once

#include "mtnpass/line1d.hpp"
#include "mtnpass/objective.hpp"
#include "mtnpass/pardist.hpp"
#include "mtnpass/types.hpp"

#include <optional>

namespace mtnpass {

enum class StepKind { Init, PD, Av, LUp, LDown, Newton };

const char* to_string(StepKind kind) noexcept;

/// Iterate of the level-set method: endpoints z, z' on {f = l}, unit direction
/// v along z - z', base point x on [z', z].
struct SolverState {
  Vec z;
  Vec z_prime;
  Vec v;
  double level = 0.0;
  Vec x;
  int iteration = 0;
  TrustRegion region;
  StepKind last_step = StepKind::Init;

  Vec midpoint() const { return 0.5 * (z + z_prime); }
  double gap() const { return (z - z_prime).norm(); }
};

struct StepOptions {
  PardistOptions pardist;
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 40;
  /// Newton on v-perp only when the reduced Hessian's smallest eigenvalue exceeds this.
  double newton_min_eig = 1e-10;
  bool use_newton = true;
};

/// Largest |f(.) - l| over the two endpoints.
double level_residual(const Objective& obj, const SolverState& state);

/// State whose endpoints are the two ends of a section.
SolverState state_from_section(const LineSection& section, const TrustRegion& region,
                               StepKind kind, int iteration);

enum class PdResult { ReducedSegment, HitZero, Stalled };

struct PdOutcome {
  PdResult result = PdResult::Stalled;
  SolverState state;
  std::optional<Vec> line_max;  // x' for HitZero
  double g_before = 0.0;
  double g_after = 0.0;
  bool used_newton = false;
};

/// Parallel distance reduction: one Armijo-backtracked step on g^2 from the
/// midpoint, along the reduced Newton direction in v-perp when it is usable and
/// along the projected negative gradient otherwise.
PdOutcome step_pd(const SolverState& state, const Objective& obj, const StepOptions& opts = {});

/// Adjusting v: moves the endpoint with the larger gradient norm (ties move z)
/// tangentially toward the other endpoint, re-projects it onto {f = l} and
/// re-derives v. Throws AvStalled when |z - z'| cannot be reduced.
SolverState step_av(const SolverState& state, const Objective& obj, const StepOptions& opts = {});

struct LDownOutcome {
  double level = 0.0;
  Vec x;
  LineSection section;
};

/// Decreasing l: from a line-local max x of f along v, minimizes f along the
/// normalized projection of -grad f(x) onto v-perp; the minimum value is the
/// new level and the crossings of that level along v are rebuilt through the
/// minimizer. Throws CriticalCandidate when grad f(x) is parallel to v.
LDownOutcome step_l_down(const Vec& x, const Vec& v, const Objective& obj, const TrustRegion& region,
                         const StepOptions& opts = {});

/// Increasing l to f((z + z')/2) with v unchanged; endpoints are rebuilt along
/// v through the midpoint. A target level in (l, f(midpoint)] may replace
/// f(midpoint). Throws LUpImpossible when f(midpoint) <= l.
SolverState step_l_up(const SolverState& state, const Objective& obj, const StepOptions& opts = {},
                      std::optional<double> target = std::nullopt);

/// Orthonormal basis of the complement of unit v, as columns.
Mat orthogonal_complement(const Vec& v);

}  // namespace mtnpass
