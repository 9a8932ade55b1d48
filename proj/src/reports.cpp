#include "mtnpass/reports.hpp"

#include "mtnpass/quadmodel.hpp"

#include <cmath>
#include <random>

namespace mtnpass {

using nlohmann::json;

json to_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json(const TraceRecord& r) {
  return json{{"iter", r.iteration},
              {"kind", to_string(r.kind)},
              {"l", r.level},
              {"g", r.g},
              {"gap", r.gap},
              {"grad_norm_z", r.grad_norm_z},
              {"grad_norm_zp", r.grad_norm_zp},
              {"x", to_json(r.x)}};
}

json trace_to_json(const std::vector<TraceRecord>& trace) {
  json records = json::array();
  for (const auto& r : trace) records.push_back(to_json(r));
  return json{{"records", records}};
}

json to_json(const SolveReport& report) {
  return json{{"status", to_string(report.status)},
              {"x", to_json(report.x)},
              {"f", report.f},
              {"grad_norm", report.grad_norm},
              {"morse_index", report.morse_index},
              {"iterations", report.iterations},
              {"evaluations",
               {{"value", report.evals.value}, {"gradient", report.evals.gradient}, {"hessian", report.evals.hessian}}},
              {"message", report.message}};
}

json to_json(const GradCheckReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"x", to_json(e.sample.x)},
                       {"v", to_json(e.sample.v)},
                       {"l", e.sample.level},
                       {"rel_error_gradient", e.rel_error_gradient},
                       {"rel_error_hessian", e.rel_error_hessian},
                       {"passed", e.passed}});
  }
  return json{{"checked", report.checked},
              {"skipped", report.skipped},
              {"failed", report.failed},
              {"max_rel_error_gradient", report.max_rel_error_gradient},
              {"max_rel_error_hessian", report.max_rel_error_hessian},
              {"entries", entries}};
}

namespace {

json comparisons_to_json(const std::vector<QuadraticComparison>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"scale", r.scale},
                   {"offset", r.offset},
                   {"level_gap", r.level_gap},
                   {"vector_gap", r.vector_gap},
                   {"evaluated", std::isfinite(r.deviation)},
                   {"deviation", r.deviation},
                   {"ref_norm", r.ref_norm}});
  }
  return out;
}

struct SaddleSite {
  Objective obj;
  Vec x_bar;
};

SaddleSite saddle_site(const std::string& function, std::uint64_t seed) {
  if (function == "quadratic") {
    const QuadraticModel model = generate_morse1(3, seed);
    return {quadratic_objective(model), saddle_of(model).x};
  }
  Objective obj = builtin(function);
  return {obj, Vec::Zero(obj.dimension())};
}

Vec negative_eigenvector(const Objective& obj, const Vec& x) {
  const SpectralDecomposition eig = decompose(obj.hessian(x));
  return eig.vectors.col(eig.values.size() - 1);
}

SuiteResult quadratic_oracle_suite(std::uint64_t seed) {
  constexpr int kModels = 200;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  SuiteResult result;
  double max_err = 0.0;
  int segments = 0;
  for (int i = 0; i < kModels; ++i) {
    const int n = 2 + i % 5;
    const QuadraticModel model = generate_morse1(n, seed * 100003 + static_cast<std::uint64_t>(i));
    const SaddleLocation saddle = saddle_of(model);
    const double lambda_n = std::abs(model.eigenvalues()(n - 1));
    Vec v;
    do {
      Vec w(n);
      for (int k = 0; k < n; ++k) w(k) = normal(rng);
      v = perturb_direction(model.negative_direction(), w, 0.3 * unit(rng));
    } while (!(v.dot(model.hessian() * v) < 0.0));
    const double level = saddle.value - (0.05 + unit(rng)) * lambda_n;
    Vec offset(n);
    for (int k = 0; k < n; ++k) offset(k) = normal(rng);
    const Vec x = saddle.x + unit(rng) * offset.normalized();

    const double closed = closed_form_g2_quadratic(model, x, v, level).g2;
    const double numeric = pardist_squared(quadratic_objective(model), x, v, level, TrustRegion(x, 100.0));
    const double err = std::abs(numeric - closed) / (1.0 + closed);
    max_err = std::max(max_err, err);
    if (closed > 0.0) ++segments;
    if (!(err <= 1e-8)) ++result.failures;
  }
  result.report = json{{"suite", "quadratic-oracle"},
                       {"seed", seed},
                       {"models", kModels},
                       {"segments", segments},
                       {"max_normalized_error", max_err},
                       {"tolerance", 1e-8},
                       {"failures", result.failures}};
  return result;
}

GradCheckReport grad_check_for(const std::string& function, int wanted, std::mt19937_64& rng) {
  GradCheckReport total;
  GradCheckTolerances tol;
  if (function == "quadratic") {
    for (int attempt = 0; attempt < 50 * wanted && total.checked < wanted; ++attempt) {
      const int n = 2 + attempt % 5;
      const QuadraticModel model = generate_morse1(n, rng());
      const SaddleLocation saddle = saddle_of(model);
      const double lambda_n = std::abs(model.eigenvalues()(n - 1));
      SampleSpec spec{0.5, 0.1, 0.05 * lambda_n, 0.5 * lambda_n};
      const auto samples = sample_near_saddle(saddle.x, model.negative_direction(), saddle.value, 1, rng, spec);
      const GradCheckReport r = check_grad_formulas(quadratic_objective(model), samples, tol);
      total.checked += r.checked;
      total.skipped += r.skipped;
      total.failed += r.failed;
      total.max_rel_error_gradient = std::max(total.max_rel_error_gradient, r.max_rel_error_gradient);
      total.max_rel_error_hessian = std::max(total.max_rel_error_hessian, r.max_rel_error_hessian);
      total.entries.insert(total.entries.end(), r.entries.begin(), r.entries.end());
    }
    return total;
  }
  const Objective obj = builtin(function);
  const Vec x_bar = Vec::Zero(2);
  const Vec v_bar = negative_eigenvector(obj, x_bar);
  const SampleSpec spec = function == "tightness2d" ? SampleSpec{0.05, 0.05, 0.01, 0.1} : SampleSpec{};
  for (int round = 0; round < 50 && total.checked < wanted; ++round) {
    auto samples = sample_near_saddle(x_bar, v_bar, obj.value(x_bar), wanted - total.checked, rng, spec);
    const GradCheckReport r = check_grad_formulas(obj, samples, tol);
    total.checked += r.checked;
    total.skipped += r.skipped;
    total.failed += r.failed;
    total.max_rel_error_gradient = std::max(total.max_rel_error_gradient, r.max_rel_error_gradient);
    total.max_rel_error_hessian = std::max(total.max_rel_error_hessian, r.max_rel_error_hessian);
    total.entries.insert(total.entries.end(), r.entries.begin(), r.entries.end());
  }
  return total;
}

SuiteResult grad_formulas_suite(const std::string& function, std::uint64_t seed) {
  std::vector<std::pair<std::string, int>> plan;
  if (function.empty()) {
    plan = {{"quadratic", 30}, {"six_hump_camel", 20}, {"tightness2d", 20}};
  } else {
    plan = {{function, 20}};
  }
  std::mt19937_64 rng(seed);
  SuiteResult result;
  json per_function = json::object();
  for (const auto& [name, wanted] : plan) {
    const GradCheckReport r = grad_check_for(name, wanted, rng);
    result.failures += r.failed + std::max(0, wanted - r.checked);
    per_function[name] = to_json(r);
  }
  result.report = json{{"suite", "grad-formulas"}, {"seed", seed}, {"functions", per_function}, {"failures", result.failures}};
  return result;
}

SuiteResult hessian_stability_suite(const std::string& function, std::uint64_t seed) {
  const std::vector<std::string> names =
      function.empty() ? std::vector<std::string>{"six_hump_camel", "quadratic"} : std::vector<std::string>{function};
  SuiteResult result;
  json per_function = json::object();
  for (const auto& name : names) {
    const SaddleSite site = saddle_site(name, seed);
    StabilityScales scales;
    scales.seed = seed;
    const StabilityReport r = check_hessian_stability(site.obj, site.x_bar, scales);
    if (!r.passed()) ++result.failures;
    per_function[name] = to_json(r);
  }
  result.report = json{{"suite", "hessian-stability"}, {"seed", seed}, {"functions", per_function}, {"failures", result.failures}};
  return result;
}

SuiteResult convexity_suite(const std::string& function, std::uint64_t seed) {
  const std::vector<std::string> names = function.empty()
                                             ? std::vector<std::string>{"quadratic", "six_hump_camel", "tightness2d"}
                                             : std::vector<std::string>{function};
  SuiteResult result;
  json per_function = json::object();
  for (const auto& name : names) {
    const SaddleSite site = saddle_site(name, seed);
    const Vec v_bar = negative_eigenvector(site.obj, site.x_bar);
    const double f_bar = site.obj.value(site.x_bar);
    if (name == "tightness2d") {
      const std::vector<double> levels{-0.1, -0.01, -0.001};
      const auto rows = convexity_radius_probe(site.obj, site.x_bar, v_bar, levels, 100, seed);
      json jrows = json::array();
      bool decreasing = true;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        jrows.push_back({{"l", rows[i].level}, {"radius", rows[i].radius}});
        if (i > 0 && !(rows[i].radius < rows[i - 1].radius)) decreasing = false;
      }
      if (!decreasing) ++result.failures;
      per_function[name] = json{{"probe", jrows}, {"strictly_decreasing", decreasing}};
      continue;
    }
    const Mat h = site.obj.hessian(site.x_bar);
    const double lambda_n = std::abs(decompose(h).values.minCoeff());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec w(v_bar.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) w(k) = normal(rng);
    const bool quadratic = name == "quadratic";
    const Vec v = quadratic ? perturb_direction(v_bar, w, 0.05) : v_bar;
    const double level = quadratic ? f_bar - 0.5 * lambda_n : f_bar - 0.05;
    const double radius = quadratic ? 0.5 : 0.05;
    const ConvexityReport r = check_convexity_region(site.obj, site.x_bar, level, v, radius, 200, seed);
    const bool ok = r.violations == 0 && (!quadratic || r.min_reduced_eigenvalue > 0.0);
    if (!ok) ++result.failures;
    json j = to_json(r);
    j["l"] = level;
    j["radius"] = radius;
    per_function[name] = j;
  }
  result.report = json{{"suite", "convexity"}, {"seed", seed}, {"functions", per_function}, {"failures", result.failures}};
  return result;
}

}  // namespace

json to_json(const StabilityReport& report) {
  return json{{"applicable", report.applicable},
              {"reason", report.reason},
              {"along_v_bar", comparisons_to_json(report.along_v_bar)},
              {"along_perturbed", comparisons_to_json(report.along_perturbed)},
              {"trend_ok", report.trend_ok},
              {"final_ok", report.final_ok}};
}

json to_json(const ConvexityReport& report) {
  return json{{"pairs", report.pairs},
              {"violations", report.violations},
              {"eval_failures", report.eval_failures},
              {"unbounded_points", report.unbounded_points},
              {"max_violation", report.max_violation},
              {"min_reduced_eigenvalue", report.min_reduced_eigenvalue},
              {"eigen_points", report.eigen_points}};
}

SuiteResult run_verify_suite(const std::string& suite, const std::string& function, std::uint64_t seed) {
  if (!function.empty() && function != "quadratic") (void)builtin(function);
  if (suite == "quadratic-oracle") return quadratic_oracle_suite(seed);
  if (suite == "grad-formulas") return grad_formulas_suite(function, seed);
  if (suite == "hessian-stability") return hessian_stability_suite(function, seed);
  if (suite == "convexity") return convexity_suite(function, seed);
  throw Error(ErrorCode::InvalidArgument, "unknown suite '" + suite + "'");
}

}  // namespace mtnpass
