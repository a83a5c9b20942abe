#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "exchpairs/direction.hpp"
#include "exchpairs/error.hpp"
#include "exchpairs/metrics.hpp"
#include "exchpairs/polyfit.hpp"
#include "exchpairs/priors.hpp"

namespace exchpairs {

// Signed direction score: positive favors x -> y, negative favors y -> x.
// An exact zero is a tie; it resolves to x -> y and is flagged.
struct DirectionScore {
  double score = 0.0;
  Direction decision = Direction::x_to_y;
  double confidence = 0.0;
  bool tie = false;
};

enum class Method {
  igci,
  reci,
  anm_hoeffding,
};

inline constexpr std::array<Method, 3> kAllMethods = {
    Method::igci,
    Method::reci,
    Method::anm_hoeffding,
};

inline constexpr int kDefaultRegressionDegree = 3;

inline std::string to_string(Method m) {
  switch (m) {
    case Method::igci: return "igci";
    case Method::reci: return "reci";
    case Method::anm_hoeffding: return "anm_hoeffding";
  }
  throw std::invalid_argument("unknown method");
}

inline Method method_from_string(const std::string& name) {
  for (Method m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown method: " + name);
}

namespace detail {

inline DirectionScore make_direction_score(double score) {
  DirectionScore out;
  out.score = score;
  out.tie = score == 0.0;
  out.decision = score < 0.0 ? Direction::y_to_x : Direction::x_to_y;
  out.confidence = std::abs(score);
  return out;
}

inline void check_same_size(const std::vector<double>& xs,
                            const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("xs and ys must have equal length");
  }
}

// Mean log absolute slope over x-sorted points. Runs of equal x are merged
// into one point carrying the mean y; zero y-increments are skipped.
inline double mean_log_slope(const std::vector<double>& xs,
                             const std::vector<double>& ys) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });

  std::vector<double> mx;
  std::vector<double> my;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    double sum_y = 0.0;
    while (j < order.size() && xs[order[j]] == xs[order[i]]) {
      sum_y += ys[order[j]];
      ++j;
    }
    mx.push_back(xs[order[i]]);
    my.push_back(sum_y / static_cast<double>(j - i));
    i = j;
  }
  if (mx.size() < 2) {
    throw InsufficientDataError("igci needs at least two distinct x values");
  }

  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k + 1 < mx.size(); ++k) {
    const double dy = my[k + 1] - my[k];
    if (dy == 0.0) continue;
    total += std::log(std::abs(dy / (mx[k + 1] - mx[k])));
    ++used;
  }
  if (used == 0) {
    throw InsufficientDataError("igci found no nonzero increments");
  }
  return total / static_cast<double>(used);
}

inline double poly_mse(const std::vector<double>& xs,
                       const std::vector<double>& ys, int degree) {
  const std::vector<double> coeffs = polyfit_lstsq(xs, ys, degree);
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - poly_eval(coeffs, xs[i]);
    total += r * r;
  }
  return total / static_cast<double>(xs.size());
}

inline double residual_dependence(const std::vector<double>& xs,
                                  const std::vector<double>& ys, int degree) {
  const std::vector<double> coeffs = polyfit_lstsq(xs, ys, degree);
  std::vector<double> residuals(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    residuals[i] = ys[i] - poly_eval(coeffs, xs[i]);
  }
  return hoeffding_d(residuals, xs);
}

}  // namespace detail

// Slope-based IGCI. Both directions reuse one helper with swapped arguments,
// so score(xs, ys) == -score(ys, xs) holds bitwise.
inline DirectionScore igci_score(const std::vector<double>& xs,
                                 const std::vector<double>& ys) {
  detail::check_same_size(xs, ys);
  if (xs.size() < 3) {
    throw InsufficientDataError("igci needs at least 3 samples");
  }
  const std::vector<double> sx = unit_scale(xs);
  const std::vector<double> sy = unit_scale(ys);
  const double forward = detail::mean_log_slope(sx, sy);
  const double reverse = detail::mean_log_slope(sy, sx);
  return detail::make_direction_score(reverse - forward);
}

// Polynomial-regression error comparison; the direction with the smaller
// least-squares MSE wins.
inline DirectionScore reci_score(const std::vector<double>& xs,
                                 const std::vector<double>& ys,
                                 int degree = kDefaultRegressionDegree) {
  detail::check_same_size(xs, ys);
  if (degree < 1) throw std::invalid_argument("degree must be positive");
  if (xs.size() < static_cast<std::size_t>(degree) + 2) {
    throw InsufficientDataError("reci needs at least degree + 2 samples");
  }
  const std::vector<double> sx = unit_scale(xs);
  const std::vector<double> sy = unit_scale(ys);
  const double forward = detail::poly_mse(sx, sy, degree);
  const double reverse = detail::poly_mse(sy, sx, degree);
  return detail::make_direction_score(reverse - forward);
}

// Additive-noise test: regress each axis on the other and score the rank
// dependence between residual and regressor. Lower forward dependence
// favors x -> y.
inline DirectionScore anm_hoeffding_score(
    const std::vector<double>& xs, const std::vector<double>& ys,
    int degree = kDefaultRegressionDegree) {
  detail::check_same_size(xs, ys);
  if (degree < 1) throw std::invalid_argument("degree must be positive");
  if (xs.size() < 5) {
    throw InsufficientDataError("anm needs at least 5 samples");
  }
  const std::vector<double> sx = unit_scale(xs);
  const std::vector<double> sy = unit_scale(ys);
  const double forward = detail::residual_dependence(sx, sy, degree);
  const double reverse = detail::residual_dependence(sy, sx, degree);
  return detail::make_direction_score(reverse - forward);
}

inline DirectionScore score_pair(Method method, const std::vector<double>& xs,
                                 const std::vector<double>& ys) {
  switch (method) {
    case Method::igci: return igci_score(xs, ys);
    case Method::reci: return reci_score(xs, ys);
    case Method::anm_hoeffding: return anm_hoeffding_score(xs, ys);
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace exchpairs
