#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "exchpairs/error.hpp"
#include "exchpairs/parallel.hpp"
#include "exchpairs/rng.hpp"

namespace exchpairs {

// Row-major performance matrix: one row per method, one column per cell.
using Matrix = std::vector<std::vector<double>>;

// Least-squares target: minimize ||A w - b||^2 + reg * ||w||_2 over the
// probability simplex. The second term is the plain Euclidean norm, not
// its square; it is smooth on the simplex because w = 0 is infeasible.
struct WeightProblem {
  Matrix a;
  std::vector<double> b;
  double reg = 1.0;

  std::size_t rows() const { return a.size(); }
  std::size_t cols() const { return a.empty() ? 0 : a.front().size(); }

  void validate() const {
    if (a.empty() || a.front().empty()) {
      throw std::invalid_argument("weight problem needs a nonempty matrix");
    }
    const std::size_t d = a.front().size();
    for (const auto& row : a) {
      if (row.size() != d) {
        throw std::invalid_argument("weight problem rows differ in length");
      }
      for (double v : row) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
          throw std::invalid_argument("matrix entries must lie in [0, 1]");
        }
      }
    }
    if (b.size() != a.size()) {
      throw std::invalid_argument("reference vector length mismatch");
    }
    for (double v : b) {
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw std::invalid_argument("reference entries must lie in [0, 1]");
      }
    }
    if (!std::isfinite(reg) || reg < 0.0) {
      throw std::invalid_argument("reg must be a nonnegative real");
    }
  }
};

struct WeightFit {
  std::vector<double> w;
  double objective = 0.0;
  std::size_t iterations = 0;
  std::vector<double> objective_trace;
};

struct DistanceReport {
  double l1 = 0.0;
  double l2 = 0.0;
};

struct LooReport {
  std::vector<double> per_method_l1;
  std::vector<double> per_method_l2;
  std::vector<WeightFit> fits;
  double l1 = 0.0;
  double l2 = 0.0;
};

inline constexpr std::size_t kWeightRestarts = 20;

namespace detail {

// Euclidean projection onto {w : w >= 0, sum w = 1} by the sort-and-threshold
// rule.
inline std::vector<double> project_simplex(std::vector<double> v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) tau = t;
  }
  for (double& x : v) x = std::max(x - tau, 0.0);
  return v;
}

inline std::vector<double> residual(const WeightProblem& p,
                                    const std::vector<double>& w) {
  std::vector<double> r(p.rows(), 0.0);
  for (std::size_t i = 0; i < p.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < p.cols(); ++j) s += p.a[i][j] * w[j];
    r[i] = s - p.b[i];
  }
  return r;
}

inline double weight_objective(const WeightProblem& p,
                               const std::vector<double>& w) {
  double quad = 0.0;
  for (double r : residual(p, w)) quad += r * r;
  double norm = 0.0;
  for (double x : w) norm += x * x;
  return quad + p.reg * std::sqrt(norm);
}

inline std::vector<double> weight_gradient(const WeightProblem& p,
                                           const std::vector<double>& w) {
  const std::vector<double> r = residual(p, w);
  std::vector<double> g(p.cols(), 0.0);
  for (std::size_t i = 0; i < p.rows(); ++i) {
    for (std::size_t j = 0; j < p.cols(); ++j) g[j] += 2.0 * p.a[i][j] * r[i];
  }
  double norm = 0.0;
  for (double x : w) norm += x * x;
  norm = std::sqrt(norm);
  for (std::size_t j = 0; j < p.cols(); ++j) g[j] += p.reg * w[j] / norm;
  return g;
}

// Projected gradient from one starting point with a backtracking step that
// only ever accepts a non-increasing objective.
inline WeightFit solve_weights_from(const WeightProblem& p,
                                    const std::vector<double>& start,
                                    double tol, std::size_t max_iter) {
  WeightFit fit;
  fit.w = project_simplex(start);
  double f = weight_objective(p, fit.w);
  fit.objective_trace.push_back(f);
  double step = 1.0;

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    const std::vector<double> g = weight_gradient(p, fit.w);
    double fcand = f;
    std::vector<double> cand;
    bool accepted = false;
    while (step >= 1e-18) {
      std::vector<double> shifted(fit.w.size());
      for (std::size_t j = 0; j < shifted.size(); ++j) {
        shifted[j] = fit.w[j] - step * g[j];
      }
      cand = project_simplex(shifted);
      double dist2 = 0.0;
      double along = 0.0;
      for (std::size_t j = 0; j < cand.size(); ++j) {
        const double d = cand[j] - fit.w[j];
        dist2 += d * d;
        along += g[j] * d;
      }
      if (dist2 == 0.0) break;
      fcand = weight_objective(p, cand);
      if (fcand <= f + along + dist2 / (2.0 * step) && fcand <= f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double decrease = f - fcand;
    fit.w = std::move(cand);
    f = fcand;
    ++fit.iterations;
    fit.objective_trace.push_back(f);
    if (decrease < tol) break;
    step = std::min(step * 2.0, 1.0);
  }
  fit.objective = f;
  return fit;
}

inline std::vector<double> random_simplex_point(RandomStream& rng,
                                                std::size_t d) {
  std::vector<double> w(d);
  double total = 0.0;
  for (double& x : w) {
    x = -std::log(1.0 - rng.uniform01());
    total += x;
  }
  if (total == 0.0) return std::vector<double>(d, 1.0 / static_cast<double>(d));
  for (double& x : w) x /= total;
  return w;
}

}  // namespace detail

// Multistart projected-gradient fit: a uniform start plus kWeightRestarts
// random simplex starts, solved independently; the minimum objective wins
// and ties go to the lowest start index.
inline WeightFit fit_weights(const WeightProblem& problem, double tol = 1e-12,
                             std::size_t max_iter = 10000,
                             std::uint64_t seed = 0) {
  problem.validate();
  const std::size_t d = problem.cols();

  std::vector<std::vector<double>> starts;
  starts.reserve(kWeightRestarts + 1);
  starts.emplace_back(d, 1.0 / static_cast<double>(d));
  RandomStream root(seed);
  for (std::size_t r = 0; r < kWeightRestarts; ++r) {
    RandomStream sub = root.child(r + 1);
    starts.push_back(detail::random_simplex_point(sub, d));
  }

  std::vector<WeightFit> fits(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    fits[i] = detail::solve_weights_from(problem, starts[i], tol, max_iter);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < fits.size(); ++i) {
    if (fits[i].objective < fits[best].objective) best = i;
  }
  return fits[best];
}

inline std::vector<double> weighted_performance(const Matrix& a,
                                                const std::vector<double>& w) {
  if (a.empty()) throw std::invalid_argument("empty matrix");
  double total = 0.0;
  for (double x : w) total += x;
  if (std::abs(total - 1.0) > 1e-6) {
    throw std::invalid_argument("weights must sum to 1");
  }
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != w.size()) {
      throw std::invalid_argument("weight length does not match matrix");
    }
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) s += a[i][j] * w[j];
    out[i] = s;
  }
  return out;
}

// l1 is the mean absolute difference, l2 the mean squared difference.
inline DistanceReport distance_report(const std::vector<double>& ours,
                                      const std::vector<double>& reference) {
  if (ours.size() != reference.size() || ours.empty()) {
    throw std::invalid_argument("distance_report needs equal nonempty vectors");
  }
  DistanceReport out;
  for (std::size_t i = 0; i < ours.size(); ++i) {
    const double d = ours[i] - reference[i];
    out.l1 += std::abs(d);
    out.l2 += d * d;
  }
  out.l1 /= static_cast<double>(ours.size());
  out.l2 /= static_cast<double>(ours.size());
  return out;
}

// Leave-one-method-out: refit without row i, then measure how well the held
// out method's reference value is predicted.
inline LooReport loo_cross_validation(const WeightProblem& problem,
                                      double tol = 1e-12,
                                      std::size_t max_iter = 10000,
                                      std::uint64_t seed = 0) {
  problem.validate();
  const std::size_t m = problem.rows();
  if (m < 2) {
    throw std::invalid_argument("leave-one-out needs at least two methods");
  }

  LooReport report;
  report.per_method_l1.resize(m);
  report.per_method_l2.resize(m);
  report.fits.resize(m);
  for (std::size_t hold = 0; hold < m; ++hold) {
    WeightProblem sub;
    sub.reg = problem.reg;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == hold) continue;
      sub.a.push_back(problem.a[i]);
      sub.b.push_back(problem.b[i]);
    }
    const WeightFit fit = fit_weights(sub, tol, max_iter, seed);
    double pred = 0.0;
    for (std::size_t j = 0; j < problem.cols(); ++j) {
      pred += problem.a[hold][j] * fit.w[j];
    }
    const double err = std::abs(pred - problem.b[hold]);
    report.per_method_l1[hold] = err;
    report.per_method_l2[hold] = err * err;
    report.fits[hold] = fit;
    report.l1 += err;
    report.l2 += err * err;
  }
  report.l1 /= static_cast<double>(m);
  report.l2 /= static_cast<double>(m);
  return report;
}

}  // namespace exchpairs
