#include "mtnpass/quadmodel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

namespace mtnpass {
namespace {

double off_diagonal_norm(const Mat& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

void require_symmetric(const Mat& h, double tol) {
  if (h.rows() != h.cols()) throw Error(ErrorCode::InvalidArgument, "matrix is not square");
  const double asym = (h - h.transpose()).lpNorm<Eigen::Infinity>();
  if (asym > tol) throw Error(ErrorCode::NonSymmetric, "matrix asymmetry " + std::to_string(asym));
}

}  // namespace

SpectralDecomposition decompose(const Mat& h) {
  require_symmetric(h, 1e-12 * std::max(1.0, h.lpNorm<Eigen::Infinity>()));
  const Eigen::Index n = h.rows();
  Mat a = 0.5 * (h + h.transpose());
  Mat q = Mat::Identity(n, n);
  const double threshold = 1e-14 * a.norm();

  for (int sweep = 0; sweep < 100 && off_diagonal_norm(a) > threshold; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index r = p + 1; r < n; ++r) {
        const double apr = a(p, r);
        if (apr == 0.0) continue;
        const double tau = (a(r, r) - a(p, p)) / (2.0 * apr);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // A <- J^T A J with the rotation acting on rows/cols p and r
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akr = a(k, r);
          a(k, p) = c * akp - s * akr;
          a(k, r) = s * akp + c * akr;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double ark = a(r, k);
          a(p, k) = c * apk - s * ark;
          a(r, k) = s * apk + c * ark;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double qkp = q(k, p);
          const double qkr = q(k, r);
          q(k, p) = c * qkp - s * qkr;
          q(k, r) = s * qkp + c * qkr;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
  SpectralDecomposition out{Vec(n), Mat(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = q.col(order[k]);
  }
  return out;
}

int morse_index(const Vec& eigenvalues) {
  const double scale = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  const double zero = 1e-12 * scale;
  return static_cast<int>((eigenvalues.array() < -zero).count());
}

QuadraticModel::QuadraticModel(Mat h, Vec g, double c) : h_(std::move(h)), g_(std::move(g)), c_(c) {
  if (h_.rows() != g_.size()) throw Error(ErrorCode::InvalidArgument, "H and g sizes differ");
  if (g_.size() < 1) throw Error(ErrorCode::InvalidArgument, "empty model");
  if (!h_.allFinite() || !g_.allFinite() || !std::isfinite(c_)) {
    throw Error(ErrorCode::InvalidArgument, "model has non-finite entries");
  }
  eig_ = decompose(h_);
  h_ = 0.5 * (h_ + h_.transpose());
  morse_index_ = mtnpass::morse_index(eig_.values);
}

double QuadraticModel::value(const Vec& x) const { return 0.5 * x.dot(h_ * x) + g_.dot(x) + c_; }

Vec QuadraticModel::gradient(const Vec& x) const { return h_ * x + g_; }

QuadraticModel QuadraticModel::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "model must be a JSON object");
  static const std::set<std::string> keys{"H", "g", "c"};
  for (const auto& item : doc.items()) {
    if (!keys.count(item.key())) throw Error(ErrorCode::ParseError, "unknown model key '" + item.key() + "'");
  }
  for (const auto& k : keys) {
    if (!doc.contains(k)) throw Error(ErrorCode::ParseError, "model is missing '" + k + "'");
  }
  try {
    const auto& jg = doc.at("g");
    const auto& jh = doc.at("H");
    if (!jg.is_array() || !jh.is_array()) throw Error(ErrorCode::ParseError, "H and g must be arrays");
    const auto n = static_cast<Eigen::Index>(jg.size());
    if (n == 0 || static_cast<Eigen::Index>(jh.size()) != n) {
      throw Error(ErrorCode::ParseError, "H must be n x n with n = len(g) >= 1");
    }
    Vec g(n);
    Mat h(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      g(i) = jg.at(i).get<double>();
      const auto& row = jh.at(i);
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
        throw Error(ErrorCode::ParseError, "H row " + std::to_string(i) + " has wrong length");
      }
      for (Eigen::Index j = 0; j < n; ++j) h(i, j) = row.at(j).get<double>();
    }
    const double asym = (h - h.transpose()).lpNorm<Eigen::Infinity>();
    if (asym > 1e-12) throw Error(ErrorCode::NonSymmetric, "H is not symmetric (max diff " + std::to_string(asym) + ")");
    return QuadraticModel(std::move(h), std::move(g), doc.at("c").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string QuadraticModel::to_json() const {
  nlohmann::json doc;
  doc["H"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < h_.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < h_.cols(); ++j) row.push_back(h_(i, j));
    doc["H"].push_back(row);
  }
  doc["g"] = std::vector<double>(g_.data(), g_.data() + g_.size());
  doc["c"] = c_;
  return doc.dump();
}

SaddleLocation saddle_of(const QuadraticModel& model) {
  const Vec& lambda = model.eigenvalues();
  const double scale = lambda.cwiseAbs().maxCoeff();
  if (scale == 0.0 || lambda.cwiseAbs().minCoeff() <= 1e-12 * scale) {
    throw Error(ErrorCode::SingularMatrix, "model Hessian is singular");
  }
  Vec x = -model.hessian().partialPivLu().solve(model.linear());
  return {x, model.value(x)};
}

QuadraticModel generate_morse1(int n, std::uint64_t seed, SpectrumRange range) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  if (!(range.lo > 0.0) || !(range.hi >= range.lo)) {
    throw Error(ErrorCode::InvalidArgument, "spectrum range must satisfy 0 < lo <= hi");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> magnitude(range.lo, range.hi);

  Mat q = Mat::Identity(n, n);
  for (int k = 0; k < n; ++k) {
    Vec w(n);
    for (int i = 0; i < n; ++i) w(i) = normal(rng);
    w.normalize();
    q = q * (Mat::Identity(n, n) - 2.0 * w * w.transpose());
  }
  Vec lambda(n);
  for (int i = 0; i < n; ++i) lambda(i) = magnitude(rng);
  lambda(n - 1) = -lambda(n - 1);

  Mat h = q * lambda.asDiagonal() * q.transpose();
  h = 0.5 * (h + h.transpose());
  Vec g(n);
  for (int i = 0; i < n; ++i) g(i) = normal(rng);
  const double c = normal(rng);
  return QuadraticModel(std::move(h), std::move(g), c);
}

double symmetric_condition(const Mat& h) {
  const Vec lambda = decompose(h).values.cwiseAbs();
  const double lo = lambda.minCoeff();
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return lambda.maxCoeff() / lo;
}

const char* to_string(NewtonStatus status) noexcept {
  switch (status) {
    case NewtonStatus::Converged: return "Converged";
    case NewtonStatus::MaxIter: return "MaxIter";
    case NewtonStatus::LeftRegion: return "LeftRegion";
  }
  return "Unknown";
}

NewtonResult newton_refine(const Objective& obj, const Vec& x0, const TrustRegion& region,
                           double gtol, int max_iter) {
  NewtonResult out;
  Vec x = x0;
  out.iterates.push_back(x);
  for (int k = 0;; ++k) {
    const Vec gx = obj.gradient(x);
    out.grad_norm = gx.norm();
    if (out.grad_norm <= gtol) {
      out.status = NewtonStatus::Converged;
      break;
    }
    if (k >= max_iter) {
      out.status = NewtonStatus::MaxIter;
      break;
    }
    const Mat h = obj.hessian(x);
    const double cond = symmetric_condition(h);
    if (!(cond <= 1e12)) {
      throw Error(ErrorCode::NewtonBreakdown, "Hessian condition number " + std::to_string(cond));
    }
    Vec step = -h.partialPivLu().solve(gx);
    const double len = step.norm();
    if (len > region.radius) step *= region.radius / len;
    x += step;
    out.iterations = k + 1;
    out.iterates.push_back(x);
    if (!region.contains(x)) {
      out.status = NewtonStatus::LeftRegion;
      out.grad_norm = obj.gradient(x).norm();
      break;
    }
  }
  out.x = x;
  out.morse_index = morse_index(decompose(obj.hessian(x)).values);
  return out;
}

}  // namespace mtnpass
