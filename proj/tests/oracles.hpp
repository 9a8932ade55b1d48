// Independent reference computations for the unit and acceptance tests.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Six-hump camel critical points, Newton-polished at 40 digits (mpmath).
struct CriticalPoint {
  double x1, x2, f;
  int morse;
};

inline const std::vector<CriticalPoint>& six_hump_census() {
  static const std::vector<CriticalPoint> pts{
      {0.089842013100318062, -0.71265640302073963, -1.0316284534898774, 0},
      {-0.089842013100318062, 0.71265640302073963, -1.0316284534898774, 0},
      {-1.7036067149699809, 0.79608356867262512, -0.21546382438371839, 0},
      {1.7036067149699809, -0.79608356867262512, -0.21546382438371839, 0},
      {0.0, 0.0, 0.0, 1},
      {-1.1092053368047864, 0.76826809250953984, 0.54371860097818500, 1},
      {1.1092053368047864, -0.76826809250953984, 0.54371860097818500, 1},
      {-1.6380679841897787, -0.22867406904439409, 2.2293571975307141, 1},
      {1.6380679841897787, 0.22867406904439409, 2.2293571975307141, 1},
      {-1.2960702671671091, -0.60508438803865851, 2.2294708180298597, 1},
      {1.2960702671671091, 0.60508438803865851, 2.2294708180298597, 1},
      {-1.6071047529201974, -0.56865145488413135, 2.1042503103112577, 0},
      {1.6071047529201974, 0.56865145488413135, 2.1042503103112577, 0},
      {-1.2302298765166525, -0.16233458445899496, 2.4962953510235767, 2},
      {1.2302298765166525, 0.16233458445899496, 2.4962953510235767, 2},
  };
  return pts;
}

inline double six_hump(double x1, double x2) {
  return (4.0 - 2.1 * x1 * x1 + std::pow(x1, 4) / 3.0) * x1 * x1 + x1 * x2 + (-4.0 + 4.0 * x2 * x2) * x2 * x2;
}

inline double tightness(double x1, double x2) { return (x2 - x1 * x1) * (x1 - x2 * x2); }

// Central differences with a fixed step; kept separate from the library's FD code.
inline Vec central_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

inline Mat central_hessian(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  const Eigen::Index n = x.size();
  Mat H(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Vec pp = x, pm = x, mp = x, mm = x;
      pp(i) += h, pp(j) += h;
      pm(i) += h, pm(j) -= h;
      mp(i) -= h, mp(j) += h;
      mm(i) -= h, mm(j) -= h;
      H(i, j) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
    }
  }
  return 0.5 * (H + H.transpose());
}

// Dense scan of phi on [lo, hi] followed by golden-section polish of the best sample.
inline std::pair<double, double> scan_extremum(const std::function<double(double)>& phi, double lo, double hi,
                                               bool maximize, int samples = 10000) {
  const double sign = maximize ? -1.0 : 1.0;
  int best = 0;
  double best_val = sign * phi(lo);
  for (int k = 1; k <= samples; ++k) {
    const double v = sign * phi(lo + (hi - lo) * k / samples);
    if (v < best_val) best_val = v, best = k;
  }
  const double step = (hi - lo) / samples;
  double a = lo + (hi - lo) * best / samples - step, b = a + 2.0 * step;
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200; ++it) {
    const double c = b - r * (b - a), d = a + r * (b - a);
    if (sign * phi(c) < sign * phi(d)) b = d; else a = c;
  }
  const double t = 0.5 * (a + b);
  return {t, phi(t)};
}

// Root of phi - level bracketed by a sign change on [a, b], by plain bisection.
inline double bisect(const std::function<double(double)>& phi, double level, double a, double b) {
  double fa = phi(a) - level;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = phi(m) - level;
    if ((fm > 0) == (fa > 0)) a = m, fa = fm; else b = m;
  }
  return 0.5 * (a + b);
}

// g^2 for f = 1/2 x^T H x + g^T x + c along x + t v from the scalar quadratic
// phi(t) = alpha t^2 + beta t + gamma: the roots of phi = l are t = (-beta +- sqrt(D)) / (2 alpha).
inline double quadratic_g2(const Mat& H, const Vec& g, double c, const Vec& x, const Vec& v, double level) {
  const double alpha = 0.5 * v.dot(H * v);
  const double beta = v.dot(H * x + g);
  const double gamma = 0.5 * x.dot(H * x) + g.dot(x) + c - level;
  const double disc = beta * beta - 4.0 * alpha * gamma;
  if (disc <= 0.0) return 0.0;
  return disc / (alpha * alpha);
}

}  // namespace oracle
