#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "exchpairs/metrics.hpp"
#include "exchpairs/rng.hpp"

using namespace exchpairs;

namespace {

// All-pairs oracle, written independently of the sweep implementation.
double auroc_bruteforce(const std::vector<LabeledScore>& items) {
  double numer = 0.0, denom = 0.0;
  for (const auto& p : items) {
    if (p.label != Direction::x_to_y) continue;
    for (const auto& q : items) {
      if (q.label != Direction::y_to_x) continue;
      const double w = p.weight * q.weight;
      denom += w;
      if (p.score > q.score) numer += w;
      else if (p.score == q.score) numer += 0.5 * w;
    }
  }
  return numer / denom;
}

// Direct evaluation of the D statistic from the defining count sums.
double hoeffding_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  auto rank_of = [n](const std::vector<double>& v, std::size_t i) {
    double r = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (v[j] < v[i]) r += 1.0;
      else if (v[j] == v[i]) r += 0.5;
    }
    return r;
  };
  double d1 = 0.0, d2 = 0.0, d3 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ri = rank_of(x, i), si = rank_of(y, i);
    double qi = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double fx = x[j] < x[i] ? 1.0 : (x[j] == x[i] ? 0.5 : 0.0);
      double fy = y[j] < y[i] ? 1.0 : (y[j] == y[i] ? 0.5 : 0.0);
      qi += fx * fy;
    }
    d1 += (qi - 1.0) * (qi - 2.0);
    d2 += (ri - 1.0) * (ri - 2.0) * (si - 1.0) * (si - 2.0);
    d3 += (ri - 2.0) * (si - 2.0) * (qi - 1.0);
  }
  const double nn = static_cast<double>(n);
  return ((nn - 2.0) * (nn - 3.0) * d1 + d2 - 2.0 * (nn - 2.0) * d3) /
         (nn * (nn - 1.0) * (nn - 2.0) * (nn - 3.0) * (nn - 4.0));
}

}  // namespace

TEST_CASE("auroc of a perfect ranking", "[metrics]") {
  const std::vector<LabeledScore> items{
      {0.9, Direction::x_to_y, 1.0},
      {0.8, Direction::x_to_y, 1.0},
      {0.3, Direction::y_to_x, 1.0},
  };
  CHECK(auroc(items) == 1.0);
}

TEST_CASE("auroc of an inverted ranking", "[metrics]") {
  const std::vector<LabeledScore> items{
      {0.2, Direction::x_to_y, 1.0},
      {0.8, Direction::y_to_x, 1.0},
  };
  CHECK(auroc(items) == 0.0);
}

TEST_CASE("auroc equals the all-pairs oracle", "[metrics]") {
  RandomStream rng(808);
  for (int rep = 0; rep < 50; ++rep) {
    RandomStream sub = rng.child(rep);
    std::vector<LabeledScore> items(20);
    for (auto& it : items) {
      // Coarse grid forces plenty of score ties.
      it.score = std::floor(sub.uniform01() * 8.0) / 8.0;
      it.label = sub.bernoulli(0.5) ? Direction::x_to_y : Direction::y_to_x;
      it.weight = 1.0;
    }
    bool has_pos = false, has_neg = false;
    for (auto& it : items) {
      has_pos |= it.label == Direction::x_to_y;
      has_neg |= it.label == Direction::y_to_x;
    }
    if (!has_pos || !has_neg) continue;

    SECTION("unit weights, rep " + std::to_string(rep)) {
      CHECK(auroc(items) == auroc_bruteforce(items));
    }
    for (auto& it : items) it.weight = 0.25 + sub.uniform01();
    SECTION("random weights, rep " + std::to_string(rep)) {
      CHECK_THAT(auroc(items),
                 Catch::Matchers::WithinAbs(auroc_bruteforce(items), 1e-12));
    }
  }
}

TEST_CASE("auroc needs both classes", "[metrics]") {
  CHECK_THROWS_AS(auroc({{0.5, Direction::x_to_y, 1.0}}), UndefinedMetricError);
  CHECK_THROWS_AS(auroc({{0.5, Direction::y_to_x, 1.0},
                         {0.7, Direction::y_to_x, 1.0}}),
                  UndefinedMetricError);
  // A class present only with zero weight counts as absent.
  CHECK_THROWS_AS(auroc({{0.5, Direction::x_to_y, 0.0},
                         {0.7, Direction::y_to_x, 1.0}}),
                  UndefinedMetricError);
}

TEST_CASE("auroc is stable under negation with flipped labels", "[metrics]") {
  RandomStream rng(123);
  std::vector<LabeledScore> items(40);
  for (auto& it : items) {
    it.score = std::floor(rng.uniform01() * 10.0) / 10.0;
    it.label = rng.bernoulli(0.4) ? Direction::x_to_y : Direction::y_to_x;
    it.weight = 0.5 + rng.uniform01();
  }
  auto mirrored = items;
  for (auto& it : mirrored) {
    it.score = -it.score;
    it.label = flip(it.label);
  }
  CHECK_THAT(auroc(mirrored), Catch::Matchers::WithinAbs(auroc(items), 1e-12));
}

TEST_CASE("auroc ignores strictly increasing score transforms", "[metrics]") {
  RandomStream rng(321);
  std::vector<LabeledScore> items(60);
  for (auto& it : items) {
    it.score = rng.normal();
    it.label = rng.bernoulli(0.5) ? Direction::x_to_y : Direction::y_to_x;
    it.weight = 1.0 + rng.uniform01();
  }
  auto warped = items;
  for (auto& it : warped) it.score = std::exp(0.7 * it.score) + 3.0;
  CHECK(auroc(warped) == auroc(items));
}

TEST_CASE("accuracy basics", "[metrics]") {
  using D = Direction;
  CHECK(accuracy({{D::x_to_y, D::x_to_y, 1.0}, {D::y_to_x, D::y_to_x, 1.0}}) == 1.0);
  CHECK(accuracy({{D::x_to_y, D::x_to_y, 1.0},
                  {D::x_to_y, D::y_to_x, 1.0},
                  {D::x_to_y, D::x_to_y, 1.0},
                  {D::x_to_y, D::y_to_x, 1.0}}) == 0.5);
  CHECK(accuracy({{D::x_to_y, D::x_to_y, 2.0}, {D::x_to_y, D::y_to_x, 1.0}}) ==
        2.0 / 3.0);
  CHECK_THROWS_AS(accuracy({}), UndefinedMetricError);
  CHECK_THROWS_AS(accuracy({{D::x_to_y, D::x_to_y, 0.0}}), UndefinedMetricError);
}

TEST_CASE("hoeffding d requires five samples", "[metrics]") {
  CHECK_THROWS_AS(hoeffding_d({1, 2, 3, 4}, {1, 2, 3, 4}), InsufficientDataError);
  CHECK_NOTHROW(hoeffding_d({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}));
}

TEST_CASE("hoeffding d on monotone data matches the count oracle", "[metrics]") {
  std::vector<double> x(10), y(10);
  for (int i = 0; i < 10; ++i) {
    x[i] = static_cast<double>(i);
    y[i] = static_cast<double>(i * i);
  }
  const double d = hoeffding_d(x, y);
  CHECK(d == hoeffding_oracle(x, y));
  CHECK(d > kIndependenceThreshold);  // clearly dependent
}

TEST_CASE("hoeffding d matches the oracle on small noisy inputs", "[metrics]") {
  RandomStream rng(999);
  for (int rep = 0; rep < 40; ++rep) {
    RandomStream sub = rng.child(rep);
    const std::size_t n = 5 + static_cast<std::size_t>(sub.uniform_int(0, 25));
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Small integer grids produce heavy ties in both coordinates.
      x[i] = static_cast<double>(sub.uniform_int(0, 5));
      y[i] = static_cast<double>(sub.uniform_int(0, 5));
    }
    CHECK(hoeffding_d(x, y) == hoeffding_oracle(x, y));
  }
}

TEST_CASE("hoeffding d of independent uniforms stays under threshold", "[metrics]") {
  RandomStream rng(20260819);
  std::vector<double> x(2000), y(2000);
  for (auto& v : x) v = rng.uniform01();
  for (auto& v : y) v = rng.uniform01();
  const double d = hoeffding_d(x, y);
  CHECK(std::abs(d) < kIndependenceThreshold);
  CHECK(independence_flag(d));
}

TEST_CASE("hoeffding d ignores increasing coordinate transforms", "[metrics]") {
  RandomStream rng(55);
  std::vector<double> x(80), y(80);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.normal();
    y[i] = 0.5 * x[i] + rng.normal();
  }
  auto xt = x, yt = y;
  for (auto& v : xt) v = v * v * v;     // strictly increasing on all reals
  for (auto& v : yt) v = 2.0 * v + 7.0;
  CHECK(hoeffding_d(xt, yt) == hoeffding_d(x, y));
}

TEST_CASE("hoeffding d stays inside its classical range", "[metrics]") {
  // The [-1/60, 1/30] bounds are a property of tie-free (continuous) data;
  // the midrank correction can push heavily tied inputs outside them.
  RandomStream rng(42);
  for (int rep = 0; rep < 30; ++rep) {
    RandomStream sub = rng.child(rep);
    const std::size_t n = 6 + static_cast<std::size_t>(sub.uniform_int(0, 40));
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = sub.normal();
      y[i] = sub.bernoulli(0.5) ? 0.8 * x[i] + 0.2 * sub.normal() : sub.normal();
    }
    const double d = hoeffding_d(x, y);
    CHECK(d >= -1.0 / 60.0 - 1e-12);
    CHECK(d <= 1.0 / 30.0 + 1e-12);
  }
}

TEST_CASE("independence threshold is strict", "[metrics]") {
  CHECK(independence_flag(0.011));
  CHECK_FALSE(independence_flag(0.012));
  CHECK_FALSE(independence_flag(0.5));
}
