#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "exchpairs/direction.hpp"
#include "exchpairs/error.hpp"

namespace exchpairs {

struct LabeledScore {
  double score = 0.0;
  Direction label = Direction::x_to_y;
  double weight = 1.0;
};

struct DecisionRecord {
  Direction decision = Direction::x_to_y;
  Direction label = Direction::x_to_y;
  double weight = 1.0;
};

// Probability that a random positive (XtoY) outranks a random negative,
// ties counting one half; weights multiply pair contributions. Computed by a
// single sweep over score-sorted groups, which matches the all-pairs double
// loop exactly.
inline double auroc(const std::vector<LabeledScore>& items) {
  double w_pos = 0.0, w_neg = 0.0;
  for (const auto& it : items) {
    if (it.weight < 0.0)
      throw std::invalid_argument("auroc: negative weight");
    (it.label == Direction::x_to_y ? w_pos : w_neg) += it.weight;
  }
  if (w_pos == 0.0 || w_neg == 0.0)
    throw UndefinedMetricError("auroc: needs both classes");

  std::vector<std::size_t> idx(items.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return items[a].score < items[b].score;
  });

  double numer = 0.0;
  double neg_below = 0.0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    double pos_here = 0.0, neg_here = 0.0;
    while (j < idx.size() && items[idx[j]].score == items[idx[i]].score) {
      (items[idx[j]].label == Direction::x_to_y ? pos_here : neg_here) +=
          items[idx[j]].weight;
      ++j;
    }
    numer += pos_here * (neg_below + 0.5 * neg_here);
    neg_below += neg_here;
    i = j;
  }
  return numer / (w_pos * w_neg);
}

// Weighted fraction of decisions agreeing with labels.
inline double accuracy(const std::vector<DecisionRecord>& items) {
  if (items.empty()) throw UndefinedMetricError("accuracy: empty input");
  double hit = 0.0, total = 0.0;
  for (const auto& it : items) {
    if (it.weight < 0.0)
      throw std::invalid_argument("accuracy: negative weight");
    total += it.weight;
    if (it.decision == it.label) hit += it.weight;
  }
  if (total == 0.0) throw UndefinedMetricError("accuracy: zero total weight");
  return hit / total;
}

namespace detail {

// Midranks (1-based): average position of each tied run.
inline std::vector<double> midranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && v[idx[j]] == v[idx[i]]) ++j;
    const double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) r[idx[k]] = rank;
    i = j;
  }
  return r;
}

}  // namespace detail

// Classical rank-based Hoeffding D with midrank tie corrections, on the
// original [-1/60, 1/30] scale (no 30x rescaling); tie-free monotone data
// attains 1/30 exactly and values near zero indicate independence.
inline double hoeffding_d(const std::vector<double>& xs,
                          const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("hoeffding_d: size mismatch");
  const std::size_t n = xs.size();
  if (n < 5) throw InsufficientDataError("hoeffding_d: needs at least 5 samples");

  const auto r = detail::midranks(xs);
  const auto s = detail::midranks(ys);

  // Bivariate midrank: 1 + count of points strictly below in both
  // coordinates, with half credit for a tie in one coordinate and quarter
  // credit for ties in both.
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    double c = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const bool xl = xs[j] < xs[i], xe = xs[j] == xs[i];
      const bool yl = ys[j] < ys[i], ye = ys[j] == ys[i];
      if (xl && yl) c += 1.0;
      else if (xl && ye) c += 0.5;
      else if (xe && yl) c += 0.5;
      else if (xe && ye) c += 0.25;
    }
    q[i] = c;
  }

  double d1 = 0.0, d2 = 0.0, d3 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d1 += (q[i] - 1.0) * (q[i] - 2.0);
    d2 += (r[i] - 1.0) * (r[i] - 2.0) * (s[i] - 1.0) * (s[i] - 2.0);
    d3 += (r[i] - 2.0) * (s[i] - 2.0) * (q[i] - 1.0);
  }
  const double nn = static_cast<double>(n);
  return ((nn - 2.0) * (nn - 3.0) * d1 + d2 - 2.0 * (nn - 2.0) * d3) /
         (nn * (nn - 1.0) * (nn - 2.0) * (nn - 3.0) * (nn - 4.0));
}

inline constexpr double kIndependenceThreshold = 0.012;

// True iff d falls strictly below the threshold (deemed independent).
inline bool independence_flag(double d, double threshold = kIndependenceThreshold) {
  return d < threshold;
}

}  // namespace exchpairs
