#pragma once

#include "mtnpass/objective.hpp"
#include "mtnpass/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mtnpass {

/// Eigenpairs of a symmetric matrix, eigenvalues in descending order.
/// Column i of `vectors` pairs with values(i).
struct SpectralDecomposition {
  Vec values;
  Mat vectors;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// 1e-14 |H|_F. Throws NonSymmetric when |H - H^T|_inf > 1e-12 max(1, |H|_inf).
SpectralDecomposition decompose(const Mat& h);

/// Number of eigenvalues below -1e-12 |H|.
int morse_index(const Vec& eigenvalues);

/// f(x) = 1/2 x^T H x + g^T x + c.
class QuadraticModel {
 public:
  QuadraticModel(Mat h, Vec g, double c);

  /// Parses {"H": [[...]], "g": [...], "c": real}. H must be square, row-major
  /// and symmetric within 1e-12.
  static QuadraticModel from_json(const std::string& text);
  std::string to_json() const;

  int dimension() const noexcept { return static_cast<int>(g_.size()); }
  const Mat& hessian() const noexcept { return h_; }
  const Vec& linear() const noexcept { return g_; }
  double constant() const noexcept { return c_; }

  const Vec& eigenvalues() const noexcept { return eig_.values; }
  const Mat& eigenvectors() const noexcept { return eig_.vectors; }
  int morse_index() const noexcept { return morse_index_; }

  /// Unit eigenvector of the most negative eigenvalue.
  Vec negative_direction() const { return eig_.vectors.col(dimension() - 1); }

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;

 private:
  Mat h_;
  Vec g_;
  double c_;
  SpectralDecomposition eig_;
  int morse_index_;
};

struct SaddleLocation {
  Vec x;
  double value;
};

/// -H^{-1} g and its value. Throws SingularMatrix.
SaddleLocation saddle_of(const QuadraticModel& model);

struct SpectrumRange {
  double lo = 0.5;
  double hi = 5.0;
};

/// Random H = Q diag(lambda) Q^T with exactly one negative eigenvalue; Q is a
/// product of Householder reflectors drawn from seeded Gaussians. The
/// magnitudes |lambda_i| are uniform in the range. Deterministic per seed.
QuadraticModel generate_morse1(int n, std::uint64_t seed, SpectrumRange range = {});

/// Condition number of a symmetric matrix from its spectrum (infinite when singular).
double symmetric_condition(const Mat& h);

enum class NewtonStatus { Converged, MaxIter, LeftRegion };

struct NewtonResult {
  Vec x;
  NewtonStatus status = NewtonStatus::MaxIter;
  int iterations = 0;
  double grad_norm = 0.0;
  int morse_index = -1;
  std::vector<Vec> iterates;  // x_0, x_1, ..., x_final
};

/// Newton iteration x <- x - H(x)^{-1} grad f(x) with step length clipped to the
/// region radius. Throws NewtonBreakdown when cond(H) > 1e12.
NewtonResult newton_refine(const Objective& obj, const Vec& x0, const TrustRegion& region,
                           double gtol, int max_iter);

const char* to_string(NewtonStatus status) noexcept;

}  // namespace mtnpass
