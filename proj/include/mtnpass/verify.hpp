#pragma once

#include "mtnpass/objective.hpp"
#include "mtnpass/pardist.hpp"
#include "mtnpass/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace mtnpass {

struct GradSample {
  Vec x;
  Vec v;
  double level = 0.0;
};

struct GradCheckTolerances {
  double max_rel_error = 1e-4;
  double fd_step_gradient = 1e-5;
  double fd_step_hessian = 1e-4;
  double min_g = 0.1;      // admissible samples need g > min_g ...
  double min_denom = 0.1;  // ... and |v^T grad f| > min_denom at both endpoints
  double region_radius = 10.0;
};

struct GradCheckEntry {
  GradSample sample;
  double rel_error_gradient = 0.0;
  double rel_error_hessian = 0.0;
  bool passed = false;
};

struct GradCheckReport {
  int checked = 0;
  int skipped = 0;
  int failed = 0;
  double max_rel_error_gradient = 0.0;
  double max_rel_error_hessian = 0.0;
  std::vector<GradCheckEntry> entries;
};

/// Relative error |a - b|_inf / max(1, |a|_inf). The unit floor keeps
/// near-zero analytic values from inflating the ratio.
double relative_error(const Eigen::Ref<const Mat>& analytic, const Eigen::Ref<const Mat>& reference);

/// Compares analytic grad g^2 and hess g^2 with central differences of the
/// root-finding g^2. Inadmissible samples (empty section, small g, small or
/// degenerate denominators) are counted as skipped.
GradCheckReport check_grad_formulas(const Objective& obj, const std::vector<GradSample>& samples,
                                    const GradCheckTolerances& tol = {});

/// Samples (x, v, l) near a Morse-1 critical point x_bar: x within x_spread of
/// x_bar, v within v_spread of v_bar, l in [f_bar - level_hi, f_bar - level_lo].
struct SampleSpec {
  double x_spread = 0.1;
  double v_spread = 0.05;
  double level_lo = 0.02;
  double level_hi = 0.2;
};

std::vector<GradSample> sample_near_saddle(const Vec& x_bar, const Vec& v_bar, double f_bar,
                                           int count, std::mt19937_64& rng, const SampleSpec& spec = {});

/// H_ref = 8/(v^T H v)^2 [H v v^T H - (v^T H v) H] against the measured hess g^2.
struct QuadraticComparison {
  double scale = 0.0;
  double offset = 0.0;       // |x - x_bar|
  double level_gap = 0.0;    // f(x_bar) - l
  double vector_gap = 0.0;   // |v - v_bar|
  double deviation = 0.0;    // spectral norm of measured - H_ref
  double ref_norm = 0.0;     // spectral norm of H_ref
};

struct StabilityScales {
  int levels = 8;
  double r0 = 0.5;
  double e0_factor = 0.25;       // e0 = e0_factor |lambda_n|
  double perturbed_gap = 0.05;   // |v - v_bar| of the perturbed direction
  double trend_factor = 1.5;
  double final_rel_tol = 1e-2;
  std::uint64_t seed = 0;
};

struct StabilityReport {
  bool applicable = false;
  std::string reason;
  std::vector<QuadraticComparison> along_v_bar;
  std::vector<QuadraticComparison> along_perturbed;
  bool trend_ok = false;
  bool final_ok = false;

  bool passed() const noexcept { return applicable && trend_ok && final_ok; }
};

/// Sweeps scales s = 2^-1 ... 2^-levels with x = x_bar + s r0 u and
/// l = f(x_bar) - s e0. Not applicable unless x_bar is a Morse-1 critical point.
StabilityReport check_hessian_stability(const Objective& obj, const Vec& x_bar,
                                        const StabilityScales& scales = {});

/// Which function the midpoint test is applied to.
enum class ConvexityTarget { SquaredDistance, Distance };

struct ConvexityReport {
  int pairs = 0;
  int violations = 0;
  int eval_failures = 0;
  int unbounded_points = 0;  // sections that leave the region: g = +inf
  double max_violation = 0.0;
  double min_reduced_eigenvalue = 0.0;
  int eigen_points = 0;
};

/// Midpoint convexity of g^2 (or g) over random pairs in the ball B(x_bar, radius),
/// plus the smallest eigenvalue of hess g^2 restricted to v-perp at the pair
/// points where g > 0. A section that runs out of the region is unbounded and
/// takes g = +inf (extended-value convexity); other evaluation failures count
/// as violations.
ConvexityReport check_convexity_region(const Objective& obj, const Vec& x_bar, double level,
                                       const Vec& v, double radius, int n_pairs, std::uint64_t seed,
                                       double slack = 1e-10,
                                       ConvexityTarget target = ConvexityTarget::SquaredDistance);

struct ShrinkageRow {
  double level = 0.0;
  double radius = 0.0;  // largest violation-free radius on the probe grid
};

/// For each level, scans a geometric grid of radii upward from the smallest and
/// records the largest radius below which every probed radius is violation-free.
std::vector<ShrinkageRow> convexity_radius_probe(const Objective& obj, const Vec& x_bar,
                                                 const Vec& v, const std::vector<double>& levels,
                                                 int n_pairs, std::uint64_t seed,
                                                 ConvexityTarget target = ConvexityTarget::Distance);

/// Unit vector at distance `gap` from unit v_bar, rotated within span{v_bar, w}.
Vec perturb_direction(const Vec& v_bar, const Vec& w, double gap);

}  // namespace mtnpass
