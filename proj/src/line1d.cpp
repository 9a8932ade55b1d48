#include "mtnpass/line1d.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <utility>

namespace mtnpass {
namespace {

class LineRestriction {
 public:
  LineRestriction(const Objective& obj, const Vec& x, const Vec& v) : obj_(obj), x_(x), v_(v) {}

  double value(double t) const { return obj_.value(x_ + t * v_); }
  double slope(double t) const { return obj_.gradient(x_ + t * v_).dot(v_); }

 private:
  const Objective& obj_;
  const Vec& x_;
  const Vec& v_;
};

void require_unit(const Vec& v, const char* what) {
  if (std::abs(v.norm() - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be a unit vector");
  }
}

std::pair<double, double> chord_through(const TrustRegion& region, const Vec& x, const Vec& v) {
  if (!region.contains(x)) throw Error(ErrorCode::InvalidArgument, "base point lies outside the trust region");
  return region.chord(x, v);
}

// Zero of the slope inside [a, b] where the slope changes sign.
double refine_stationary(const LineRestriction& line, double a, double b, double sa, double sb) {
  if (sa == 0.0) return a;
  if (sb == 0.0) return b;
  if (a > b) {
    std::swap(a, b);
    std::swap(sa, sb);
  }
  std::uintmax_t max_iter = 200;
  auto slope = [&](double t) { return line.slope(t); };
  const auto bracket = boost::math::tools::toms748_solve(
      slope, a, b, sa, sb, boost::math::tools::eps_tolerance<double>(52), max_iter);
  const double s1 = std::abs(line.slope(bracket.first));
  const double s2 = std::abs(line.slope(bracket.second));
  return s1 <= s2 ? bracket.first : bracket.second;
}

// Walks from t = 0 in direction `dir` with doubling steps until the slope taken
// along dir stops being positive, or the chord end is reached.
struct WalkResult {
  bool bracketed = false;
  double prev = 0.0;
  double t = 0.0;
  double slope_prev = 0.0;
  double slope_t = 0.0;
};

WalkResult walk_until_slope_turns(const LineRestriction& line, double dir, double slope0, double lo,
                                  double hi, double h0) {
  WalkResult w;
  w.slope_prev = slope0;
  double h = h0;
  double prev = 0.0;
  for (;;) {
    double t = prev + dir * h;
    bool at_end = false;
    if (t >= hi) {
      t = hi;
      at_end = true;
    } else if (t <= lo) {
      t = lo;
      at_end = true;
    }
    const double st = line.slope(t);
    if (dir * st <= 0.0) {
      w.bracketed = true;
      w.prev = prev;
      w.t = t;
      w.slope_t = st;
      return w;
    }
    if (at_end) {
      w.prev = prev;
      w.t = t;
      w.slope_t = st;
      return w;
    }
    prev = t;
    w.slope_prev = st;
    h *= 2.0;
  }
}

double polish_root(const LineRestriction& line, double level, double inside, double outside) {
  const double fin = line.value(inside) - level;
  const double fout = line.value(outside) - level;
  double base = std::abs(fin) <= std::abs(fout) ? inside : outside;
  double rbase = std::abs(fin) <= std::abs(fout) ? fin : fout;
  const double slope = line.slope(base);
  if (slope != 0.0 && rbase != 0.0) {
    const double cand = base - rbase / slope;
    const double a = std::min(inside, outside);
    const double b = std::max(inside, outside);
    const double width = b - a;
    if (cand >= a - width && cand <= b + width) {
      const double rc = line.value(cand) - level;
      if (std::abs(rc) < std::abs(rbase)) base = cand;
    }
  }
  return base;
}

}  // namespace

LineExtremum line_local_max(const Objective& obj, const Vec& x, const Vec& v, const TrustRegion& region,
                            const LineTolerances& tol) {
  require_unit(v, "line direction");
  const auto [lo, hi] = chord_through(region, x, v);
  const LineRestriction line(obj, x, v);

  const double s0 = line.slope(0.0);
  if (std::abs(s0) <= tol.grad_tol_1d) return {0.0, line.value(0.0), false};

  const double dir = s0 > 0.0 ? 1.0 : -1.0;
  const WalkResult w = walk_until_slope_turns(line, dir, s0, lo, hi, 1e-2 * region.radius);
  if (!w.bracketed) {
    throw Error(ErrorCode::NoLineMax, "f increases along the line up to the trust-region boundary");
  }
  const double t = refine_stationary(line, w.prev, w.t, w.slope_prev, w.slope_t);
  return {t, line.value(t), false};
}

LineExtremum line_local_min(const Objective& obj, const Vec& x, const Vec& d, const TrustRegion& region,
                            const LineTolerances& /*tol*/) {
  require_unit(d, "search direction");
  const double hi = chord_through(region, x, d).second;
  const LineRestriction line(obj, x, d);

  const double s0 = line.slope(0.0);
  if (!(s0 < 0.0)) throw Error(ErrorCode::BadDirection, "direction is not a descent direction");
  double h = 1e-2 * region.radius;
  double prev = 0.0;
  double sprev = s0;
  for (;;) {
    double t = prev + h;
    const bool at_end = t >= hi;
    if (at_end) t = hi;
    const double st = line.slope(t);
    if (st >= 0.0) {
      const double ts = refine_stationary(line, prev, t, sprev, st);
      return {ts, line.value(ts), false};
    }
    if (at_end) return {t, line.value(t), true};
    prev = t;
    sprev = st;
    h *= 2.0;
  }
}

LineSection find_level_crossings(const Objective& obj, const Vec& x, const Vec& v, double level,
                                 const TrustRegion& region, const LineTolerances& tol) {
  LineSection section;
  section.base = x;
  section.direction = v;
  section.level = level;
  section.peak = line_local_max(obj, x, v, region, tol);

  if (section.peak.value < level - tol.root_tol) {
    section.status = SectionStatus::Empty;
    section.t_lo = section.t_hi = section.peak.t;
    return section;
  }
  section.status = SectionStatus::Segment;
  if (section.peak.value <= level + tol.root_tol) {
    section.t_lo = section.t_hi = section.peak.t;
    return section;
  }

  const auto [lo, hi] = region.chord(x, v);
  const LineRestriction line(obj, x, v);
  const double width_tol = 1e-12 * region.radius;

  auto crossing = [&](double dir) {
    double inside = section.peak.t;
    double outside = inside;
    double h = 1e-2 * region.radius;
    for (;;) {
      double t = inside + dir * h;
      bool at_end = false;
      if (t >= hi) {
        t = hi;
        at_end = true;
      } else if (t <= lo) {
        t = lo;
        at_end = true;
      }
      if (line.value(t) < level) {
        outside = t;
        break;
      }
      if (at_end) {
        throw Error(ErrorCode::CrossingOutsideRegion,
                    "super-level set reaches the trust-region boundary");
      }
      inside = t;
      h *= 2.0;
    }
    while (std::abs(outside - inside) > width_tol) {
      const double mid = 0.5 * (inside + outside);
      if (mid == inside || mid == outside) break;
      if (line.value(mid) >= level) {
        inside = mid;
      } else {
        outside = mid;
      }
    }
    return polish_root(line, level, inside, outside);
  };

  section.t_hi = crossing(1.0);
  section.t_lo = crossing(-1.0);
  return section;
}

}  // namespace mtnpass
