#pragma once

#include "mtnpass/objective.hpp"
#include "mtnpass/types.hpp"

namespace mtnpass {

struct LineTolerances {
  double root_tol = 1e-10;     // |f(endpoint) - l|
  double grad_tol_1d = 1e-10;  // |phi'(t*)| at line extrema
};

struct LineExtremum {
  double t = 0.0;
  double value = 0.0;
  bool at_boundary = false;
};

/// Local maximizer of phi(t) = f(x + t v) reached by walking uphill from t = 0.
/// Throws NoLineMax when phi keeps increasing up to the edge of the region.
LineExtremum line_local_max(const Objective& obj, const Vec& x, const Vec& v,
                            const TrustRegion& region, const LineTolerances& tol = {});

/// First local minimizer of psi(t) = f(x + t d) for t > 0. Stops at the region
/// boundary (flagged) if psi is still decreasing there. Throws BadDirection
/// unless grad f(x)^T d < 0.
LineExtremum line_local_min(const Objective& obj, const Vec& x, const Vec& d,
                            const TrustRegion& region, const LineTolerances& tol = {});

enum class SectionStatus { Empty, Segment };

/// S_{l,v}(x): the piece of the line x + R v where f >= l, restricted to the
/// component that contains the line-local maximum nearest t = 0.
/// Endpoint convention: z = x + t_hi v, z' = x + t_lo v, so v^T z >= v^T z'.
struct LineSection {
  Vec base;
  Vec direction;
  double level = 0.0;
  SectionStatus status = SectionStatus::Empty;
  double t_lo = 0.0;
  double t_hi = 0.0;
  LineExtremum peak;  // line-local max the section was grown from

  bool is_segment() const noexcept { return status == SectionStatus::Segment; }
  double diameter() const noexcept { return is_segment() ? t_hi - t_lo : 0.0; }
  Vec z() const { return base + t_hi * direction; }
  Vec z_prime() const { return base + t_lo * direction; }
  Vec peak_point() const { return base + peak.t * direction; }
};

/// Builds S_{l,v}(x). A peak within root_tol of l yields a zero-length segment
/// at the peak; a peak below that yields Empty. Throws NoLineMax or
/// CrossingOutsideRegion.
LineSection find_level_crossings(const Objective& obj, const Vec& x, const Vec& v, double level,
                                 const TrustRegion& region, const LineTolerances& tol = {});

}  // namespace mtnpass
