#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "exchpairs/rng.hpp"
#include "exchpairs/weights.hpp"

namespace {

using namespace exchpairs;

// Exhaustive search over the simplex grid {c / steps : sum c = steps}.
// Partial residuals are restored from saved copies so rounding never leaks
// across branches.
double grid_best_objective(const WeightProblem& p, int steps) {
  const std::size_t m = p.rows();
  const std::size_t d = p.cols();
  std::vector<double> acc(m);
  for (std::size_t i = 0; i < m; ++i) acc[i] = -p.b[i];
  double best = std::numeric_limits<double>::infinity();

  std::function<void(std::size_t, int, double)> rec = [&](std::size_t j,
                                                          int left,
                                                          double norm2) {
    if (j + 1 == d) {
      const double wj = static_cast<double>(left) / steps;
      double quad = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double r = acc[i] + p.a[i][j] * wj;
        quad += r * r;
      }
      const double obj = quad + p.reg * std::sqrt(norm2 + wj * wj);
      if (obj < best) best = obj;
      return;
    }
    const std::vector<double> saved = acc;
    for (int c = 0; c <= left; ++c) {
      const double wj = static_cast<double>(c) / steps;
      if (c > 0) {
        for (std::size_t i = 0; i < m; ++i) acc[i] += p.a[i][j] / steps;
      }
      rec(j + 1, left - c, norm2 + wj * wj);
    }
    acc = saved;
  };
  rec(0, steps, 0.0);
  return best;
}

WeightProblem random_problem(RandomStream& rng, std::size_t m, std::size_t d,
                             double reg) {
  WeightProblem p;
  p.reg = reg;
  p.a.assign(m, std::vector<double>(d));
  p.b.resize(m);
  for (auto& row : p.a) {
    for (double& v : row) v = rng.uniform01();
  }
  for (double& v : p.b) v = rng.uniform01();
  return p;
}

}  // namespace

TEST_CASE("identity problem is fit exactly", "[weights]") {
  WeightProblem p;
  p.a = {{1.0, 0.0}, {0.0, 1.0}};
  p.b = {1.0, 0.0};
  p.reg = 0.0;
  const WeightFit fit = fit_weights(p);
  REQUIRE(fit.w.size() == 2);
  CHECK(fit.w[0] == 1.0);
  CHECK(fit.w[1] == 0.0);
  CHECK(fit.objective == 0.0);
}

TEST_CASE("identical columns give the uniform weight", "[weights]") {
  WeightProblem p;
  p.a = {{0.4, 0.4, 0.4}, {0.7, 0.7, 0.7}};
  p.b = {0.5, 0.6};
  p.reg = 1.0;
  const WeightFit fit = fit_weights(p);
  for (double w : fit.w) {
    CHECK(w == Catch::Approx(1.0 / 3.0).margin(1e-6));
  }
}

TEST_CASE("solver matches a 0.01-step grid search", "[weights]") {
  RandomStream rng(627);
  const WeightProblem p = random_problem(rng, 4, 6, 1.0);
  const WeightFit fit = fit_weights(p);
  const double grid = grid_best_objective(p, 100);
  CHECK(fit.objective <= grid + 1e-12);
  CHECK(fit.objective == Catch::Approx(grid).margin(1e-3));
}

TEST_CASE("solutions stay on the simplex with monotone objective",
          "[weights]") {
  RandomStream rng(88);
  const double regs[] = {0.0, 0.3, 1.0};
  for (int rep = 0; rep < 30; ++rep) {
    RandomStream sub = rng.child(static_cast<std::uint64_t>(rep));
    const std::size_t m = 2 + static_cast<std::size_t>(sub.uniform_int(0, 5));
    const std::size_t d = 2 + static_cast<std::size_t>(sub.uniform_int(0, 8));
    WeightProblem p = random_problem(sub, m, d, regs[rep % 3]);
    const WeightFit fit = fit_weights(p);

    double total = 0.0;
    for (double w : fit.w) {
      CHECK(w >= 0.0);
      total += w;
    }
    CHECK(std::abs(total - 1.0) <= 1e-9);
    REQUIRE(!fit.objective_trace.empty());
    for (std::size_t k = 0; k + 1 < fit.objective_trace.size(); ++k) {
      CHECK(fit.objective_trace[k + 1] <= fit.objective_trace[k]);
    }
    CHECK(fit.objective == fit.objective_trace.back());
  }
}

TEST_CASE("feasible unregularized targets reach zero objective", "[weights]") {
  RandomStream rng(12);
  for (int rep = 0; rep < 10; ++rep) {
    RandomStream sub = rng.child(static_cast<std::uint64_t>(rep));
    WeightProblem p = random_problem(sub, 3, 5, 0.0);
    std::vector<double> truth(5);
    double total = 0.0;
    for (double& v : truth) {
      v = sub.uniform01();
      total += v;
    }
    for (double& v : truth) v /= total;
    for (std::size_t i = 0; i < p.rows(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < p.cols(); ++j) s += p.a[i][j] * truth[j];
      p.b[i] = s;
    }
    CHECK(fit_weights(p).objective <= 1e-8);
  }
}

TEST_CASE("weighted performance is the matrix action", "[weights]") {
  const Matrix a = {{0.1, 0.5, 0.9}, {0.4, 0.2, 0.6}};

  SECTION("one-hot picks a column") {
    const std::vector<double> out = weighted_performance(a, {0.0, 1.0, 0.0});
    CHECK(out[0] == 0.5);
    CHECK(out[1] == 0.2);
  }
  SECTION("uniform gives row means") {
    const std::vector<double> out =
        weighted_performance(a, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(out[0] == Catch::Approx(0.5).margin(1e-12));
    CHECK(out[1] == Catch::Approx(0.4).margin(1e-12));
  }
  SECTION("convex combinations stay within row bounds") {
    const std::vector<double> out = weighted_performance(a, {0.2, 0.5, 0.3});
    CHECK(out[0] >= 0.1);
    CHECK(out[0] <= 0.9);
    CHECK(out[1] >= 0.2);
    CHECK(out[1] <= 0.6);
  }
  SECTION("errors") {
    CHECK_THROWS_AS(weighted_performance(a, {0.5, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(weighted_performance(a, {0.5, 0.2, 0.2}),
                    std::invalid_argument);
  }
}

TEST_CASE("distance report arithmetic", "[weights]") {
  SECTION("identical vectors") {
    const DistanceReport r = distance_report({0.3, 0.7}, {0.3, 0.7});
    CHECK(r.l1 == 0.0);
    CHECK(r.l2 == 0.0);
  }
  SECTION("symmetric difference") {
    const DistanceReport r = distance_report({0.5, 0.5}, {0.4, 0.6});
    CHECK(r.l1 == Catch::Approx(0.1).margin(1e-15));
    CHECK(r.l2 == Catch::Approx(0.01).margin(1e-15));
  }
  SECTION("length mismatch") {
    CHECK_THROWS_AS(distance_report({0.1}, {0.1, 0.2}), std::invalid_argument);
  }
}

TEST_CASE("problem validation rejects bad input", "[weights]") {
  WeightProblem p;
  p.a = {{0.5, 0.5}, {0.2, 0.8}};
  p.b = {0.5, 0.5};

  WeightProblem bad = p;
  bad.b = {0.5};
  CHECK_THROWS_AS(fit_weights(bad), std::invalid_argument);

  bad = p;
  bad.a[1] = {0.2};
  CHECK_THROWS_AS(fit_weights(bad), std::invalid_argument);

  bad = p;
  bad.a[0][0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(fit_weights(bad), std::invalid_argument);

  bad = p;
  bad.a[0][0] = 1.5;
  CHECK_THROWS_AS(fit_weights(bad), std::invalid_argument);

  bad = p;
  bad.reg = -1.0;
  CHECK_THROWS_AS(fit_weights(bad), std::invalid_argument);

  bad = p;
  bad.a.clear();
  bad.b.clear();
  CHECK_THROWS_AS(fit_weights(bad), std::invalid_argument);
}

TEST_CASE("loo on duplicated rows equals the fold's own error", "[weights]") {
  WeightProblem p;
  p.a = {{0.3, 0.9, 0.1}, {0.3, 0.9, 0.1}};
  p.b = {0.6, 0.6};
  p.reg = 1.0;

  const LooReport loo = loo_cross_validation(p);
  REQUIRE(loo.fits.size() == 2);
  CHECK(loo.per_method_l1[0] == loo.per_method_l1[1]);

  // Evaluating the held-out row reuses the very row the fold trained on.
  double pred = 0.0;
  for (std::size_t j = 0; j < p.cols(); ++j) {
    pred += p.a[1][j] * loo.fits[0].w[j];
  }
  CHECK(loo.per_method_l1[0] == std::abs(pred - p.b[1]));
}

TEST_CASE("loo folds ignore the held-out row", "[weights]") {
  RandomStream rng(404);
  WeightProblem p = random_problem(rng, 4, 5, 0.5);
  const LooReport before = loo_cross_validation(p);

  WeightProblem perturbed = p;
  for (double& v : perturbed.a[0]) v = rng.uniform01();
  const LooReport after = loo_cross_validation(perturbed);

  REQUIRE(before.fits[0].w.size() == after.fits[0].w.size());
  for (std::size_t j = 0; j < before.fits[0].w.size(); ++j) {
    CHECK(before.fits[0].w[j] == after.fits[0].w[j]);
  }
}

TEST_CASE("loo needs two methods", "[weights]") {
  WeightProblem p;
  p.a = {{0.5, 0.5}};
  p.b = {0.5};
  CHECK_THROWS_AS(loo_cross_validation(p), std::invalid_argument);
}

TEST_CASE("loo error dominates in-sample error on average", "[weights]") {
  RandomStream rng(20260819);
  double mean_loo = 0.0;
  double mean_in = 0.0;
  const int reps = 100;
  for (int rep = 0; rep < reps; ++rep) {
    RandomStream sub = rng.child(static_cast<std::uint64_t>(rep));
    const WeightProblem p = random_problem(sub, 4, 6, 0.0);
    const WeightFit fit = fit_weights(p);
    const DistanceReport in_sample =
        distance_report(weighted_performance(p.a, fit.w), p.b);
    mean_in += in_sample.l1;
    mean_loo += loo_cross_validation(p).l1;
  }
  mean_in /= reps;
  mean_loo /= reps;
  CHECK(mean_loo >= mean_in);
}

TEST_CASE("weight fitting is deterministic", "[weights]") {
  RandomStream rng(9);
  const WeightProblem p = random_problem(rng, 5, 7, 0.7);
  const WeightFit a = fit_weights(p);
  const WeightFit b = fit_weights(p);
  CHECK(a.objective == b.objective);
  REQUIRE(a.w.size() == b.w.size());
  for (std::size_t j = 0; j < a.w.size(); ++j) CHECK(a.w[j] == b.w[j]);
}
