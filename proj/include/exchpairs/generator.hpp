#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "exchpairs/direction.hpp"
#include "exchpairs/error.hpp"
#include "exchpairs/mechanisms.hpp"
#include "exchpairs/parallel.hpp"
#include "exchpairs/priors.hpp"
#include "exchpairs/rng.hpp"

namespace exchpairs {

struct GenConfig {
  PriorKind prior_theta = PriorKind::uniform;
  PriorKind prior_psi = PriorKind::uniform;
  MechanismKind mechanism = MechanismKind::linear;
  double sigma_x = 0.01;
  double sigma_y = 0.01;
  std::size_t n_samples = 500;
  std::uint64_t seed = 0;
  GenHyper hyper;

  void validate() const {
    if (sigma_x < 0.0 || sigma_y < 0.0)
      throw std::invalid_argument("GenConfig: negative noise std");
    if (n_samples < 2)
      throw std::invalid_argument("GenConfig: n_samples must be at least 2");
  }

  bool operator==(const GenConfig&) const = default;
};

struct Example {
  std::vector<double> xs;
  std::vector<double> ys;
  Direction label = Direction::x_to_y;
  GenConfig config;
  MechanismParams params;
  double weight = 1.0;

  bool operator==(const Example&) const = default;
};

namespace detail {

// Substream tags inside one example's stream.
enum : std::uint64_t {
  kTagTheta = 1,
  kTagPsi = 2,
  kTagXNoise = 3,
  kTagYNoise = 4,
  kTagMechParams = 5,
  kTagMechPath = 6,
};

inline bool is_constant(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
}

// One pass of the generation pipeline: latent draws, scaling, cause noise,
// mechanism, sign flips, effect noise, final min-max scaling. perm routes
// per-sample substream perm[i] to slot i so exchangeability is testable.
inline Example generate_once(const GenConfig& config, const MechanismParams* forced,
                             const RandomStream& ex,
                             const std::vector<std::size_t>& perm) {
  const std::size_t n = config.n_samples;
  const auto theta = sample_prior(config.prior_theta, n, ex.child(kTagTheta), &perm);
  const auto psi = sample_prior(config.prior_psi, n, ex.child(kTagPsi), &perm);

  const RandomStream xnoise = ex.child(kTagXNoise);
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream s = xnoise.child(perm[i]);
    xs[i] = theta.values[i] + config.sigma_x * s.normal();
  }
  if (is_constant(xs))
    throw DegenerateExampleError("generate: constant X before scaling");
  xs = unit_scale(xs);

  RandomStream param_rng = ex.child(kTagMechParams);
  const MechanismParams params =
      forced ? *forced
             : sample_mechanism_params(config.mechanism, config.hyper, param_rng);

  RandomStream path_rng = ex.child(kTagMechPath);
  std::vector<double> y_true = apply_mechanism(xs, psi, params, path_rng);
  if (params.flip_y)
    for (double& y : y_true) y = -y;
  if (params.flip_x)
    for (double& x : xs) x = -x;

  const RandomStream ynoise = ex.child(kTagYNoise);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream s = ynoise.child(perm[i]);
    ys[i] = y_true[i] + config.sigma_y * s.normal();
  }
  if (is_constant(ys))
    throw DegenerateExampleError("generate: constant Y before scaling");

  Example out;
  out.xs = unit_scale(xs);
  out.ys = unit_scale(ys);
  out.label = Direction::x_to_y;
  out.config = config;
  out.params = params;
  out.weight = 1.0;
  return out;
}

}  // namespace detail

inline constexpr int kMaxGenerateAttempts = 10;

// Generates one cause-effect example. Degenerate attempts (constant axes,
// non-finite mechanism output) are retried with a fresh substream up to
// kMaxGenerateAttempts times. forced_params, when given, bypasses parameter
// sampling (the retry loop then only redraws latents and noise). perm, when
// given, permutes the per-sample substreams; see the exchangeability
// property in the tests.
inline Example generate_example(const GenConfig& config, const RandomStream& rng,
                                const MechanismParams* forced_params = nullptr,
                                const std::vector<std::size_t>* perm = nullptr) {
  config.validate();
  std::vector<std::size_t> identity;
  if (!perm) {
    identity.resize(config.n_samples);
    std::iota(identity.begin(), identity.end(), 0);
  } else if (perm->size() != config.n_samples) {
    throw std::invalid_argument("generate_example: permutation size mismatch");
  }
  const std::vector<std::size_t>& p = perm ? *perm : identity;

  std::string last;
  for (int attempt = 0; attempt < kMaxGenerateAttempts; ++attempt) {
    const RandomStream ex = rng.child(static_cast<std::uint64_t>(attempt));
    try {
      return detail::generate_once(config, forced_params, ex, p);
    } catch (const DegenerateExampleError& e) {
      last = e.what();
    } catch (const DegenerateInputError& e) {
      last = e.what();
    } catch (const InternalConsistencyError& e) {
      last = e.what();
    }
  }
  throw DegenerateExampleError("generate_example: all " +
                               std::to_string(kMaxGenerateAttempts) +
                               " attempts degenerate; last: " + last);
}

// y <- y (1 + m) + a with m ~ N(0, mult_std), a ~ N(0, add_std) per sample,
// then re-min-max-scaled. xs and label stay untouched.
inline Example noisify(const Example& example, double add_std, double mult_std,
                       RandomStream& rng) {
  if (add_std < 0.0 || mult_std < 0.0)
    throw std::invalid_argument("noisify: negative noise std");
  Example out = example;
  for (double& y : out.ys)
    y = y * (1.0 + rng.normal(0.0, mult_std)) + rng.normal(0.0, add_std);
  if (detail::is_constant(out.ys))
    throw DegenerateExampleError("noisify: constant Y after noise");
  out.ys = unit_scale(out.ys);
  return out;
}

// ---------------------------------------------------------------------------
// Sample-size model: univariate 3-component Gaussian mixture fitted by EM.

struct SizeModel {
  std::array<double, 3> weights{};
  std::array<double, 3> means{};
  std::array<double, 3> stds{};
  std::vector<double> loglik_trace;  // one entry per EM iteration

  static constexpr long kMinSize = 20;
  static constexpr long kMaxSize = 10000;

  // Draws one size: pick a component, draw a normal, round, clamp.
  long sample(RandomStream& rng) const {
    const double u = rng.uniform01();
    int c = 0;
    double acc = 0.0;
    for (int j = 0; j < 3; ++j) {
      acc += weights[j];
      if (u < acc) {
        c = j;
        break;
      }
      c = j;  // numeric slack: fall through to the last component
    }
    const double v = rng.normal(means[c], stds[c]);
    const long rounded = static_cast<long>(std::llround(v));
    return std::clamp(rounded, kMinSize, kMaxSize);
  }
};

inline SizeModel fit_size_model(const std::vector<long>& sizes) {
  for (long s : sizes)
    if (s <= 0) throw std::invalid_argument("fit_size_model: nonpositive size");
  std::vector<double> v(sizes.begin(), sizes.end());
  {
    auto d = v;
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    if (d.size() < 3)
      throw std::invalid_argument("fit_size_model: need at least 3 distinct sizes");
  }
  const std::size_t n = v.size();
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());

  SizeModel model;
  // Deterministic initialization: means at the 1/6, 3/6, 5/6 quantiles,
  // shared spread, equal weights.
  const double spread = std::max(stddev_pop(v), 1.0);
  for (int j = 0; j < 3; ++j) {
    model.weights[j] = 1.0 / 3.0;
    model.means[j] = sorted[std::min(n - 1, n * static_cast<std::size_t>(2 * j + 1) / 6)];
    model.stds[j] = spread;
  }

  constexpr double kVarFloor = 1e-6;
  constexpr double kTol = 1e-9;
  constexpr int kMaxIter = 500;
  std::vector<std::array<double, 3>> resp(n);
  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < kMaxIter; ++iter) {
    // E step
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::array<double, 3> p{};
      double total = 0.0;
      for (int j = 0; j < 3; ++j) {
        const double sd = model.stds[j];
        const double d = (v[i] - model.means[j]) / sd;
        p[j] = model.weights[j] *
               std::exp(-0.5 * d * d) / (sd * 2.5066282746310002);
        total += p[j];
      }
      if (total <= 0.0 || !std::isfinite(total)) {
        // all densities underflowed; spread responsibility evenly
        p = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        total = 1.0;
        ll += -745.0;  // log of the smallest normal double, order-of-magnitude
      } else {
        ll += std::log(total);
      }
      for (int j = 0; j < 3; ++j) resp[i][j] = p[j] / total;
    }
    model.loglik_trace.push_back(ll);
    // M step
    for (int j = 0; j < 3; ++j) {
      double nj = 0.0, mj = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        nj += resp[i][j];
        mj += resp[i][j] * v[i];
      }
      nj = std::max(nj, 1e-12);
      const double mean_j = mj / nj;
      double var_j = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        var_j += resp[i][j] * (v[i] - mean_j) * (v[i] - mean_j);
      var_j = std::max(var_j / nj, kVarFloor);
      model.weights[j] = nj / static_cast<double>(n);
      model.means[j] = mean_j;
      model.stds[j] = std::sqrt(var_j);
    }
    if (std::abs(ll - prev_ll) < kTol) break;
    prev_ll = ll;
  }
  const double wsum = model.weights[0] + model.weights[1] + model.weights[2];
  for (auto& w : model.weights) w /= wsum;
  return model;
}

// ---------------------------------------------------------------------------
// Dataset assembly.

struct CellSpec {
  PriorKind prior_theta = PriorKind::uniform;
  PriorKind prior_psi = PriorKind::uniform;
  MechanismKind mechanism = MechanismKind::linear;

  bool operator==(const CellSpec&) const = default;

  std::string name() const {
    return std::string(to_string(mechanism)) + "/" + to_string(prior_theta) +
           "/" + to_string(prior_psi);
  }
};

// The canonical 72-cell grid: mechanism-major, then theta prior, then psi
// prior.
inline std::vector<CellSpec> all_cells() {
  std::vector<CellSpec> cells;
  cells.reserve(72);
  for (MechanismKind m : kAllMechanisms)
    for (PriorKind pt : {PriorKind::uniform, PriorKind::normal, PriorKind::rayleigh})
      for (PriorKind pp : {PriorKind::uniform, PriorKind::normal, PriorKind::rayleigh})
        cells.push_back(CellSpec{pt, pp, m});
  return cells;
}

struct DatasetExample {
  Example example;
  std::size_t cell = 0;  // index into Dataset::cells
};

struct Dataset {
  std::uint64_t seed = 0;
  std::size_t per_cell = 0;
  double noise_add = 0.0;  // post-hoc noise already applied, zero if none
  double noise_mult = 0.0;
  std::uint64_t noise_seed = 0;
  GenConfig base;  // priors/mechanism fields are overridden per cell
  std::vector<CellSpec> cells;
  std::vector<DatasetExample> examples;  // cell-major, generation order
};

// Generates per_cell examples for every cell, alternating labels within the
// cell so classes stay exactly balanced; odd slots are converted to YtoX by
// swapping the axes after generation. Cells run in parallel; every example
// derives its stream from (seed, cell, slot), so the result is independent
// of scheduling.
inline Dataset assemble_dataset(const std::vector<CellSpec>& cells,
                                std::size_t per_cell, const GenConfig& base,
                                std::uint64_t seed,
                                const SizeModel* size_model = nullptr) {
  if (per_cell == 0 || per_cell % 2 != 0)
    throw std::invalid_argument("assemble_dataset: per_cell must be even and positive");
  if (cells.empty())
    throw std::invalid_argument("assemble_dataset: no cells");

  Dataset ds;
  ds.seed = seed;
  ds.per_cell = per_cell;
  ds.base = base;
  ds.cells = cells;
  ds.examples.resize(cells.size() * per_cell);

  const RandomStream root(seed);
  parallel_for(cells.size(), [&](std::size_t c) {
    try {
      const RandomStream cell_stream = root.child(c);
      for (std::size_t j = 0; j < per_cell; ++j) {
        GenConfig config = base;
        config.prior_theta = cells[c].prior_theta;
        config.prior_psi = cells[c].prior_psi;
        config.mechanism = cells[c].mechanism;
        const RandomStream ex_stream = cell_stream.child(j);
        if (size_model) {
          RandomStream size_rng = ex_stream.child(0xD1CEull);
          config.n_samples = static_cast<std::size_t>(size_model->sample(size_rng));
        }
        config.seed = ex_stream.seed();
        Example ex = generate_example(config, ex_stream);
        if (j % 2 == 1) {
          std::swap(ex.xs, ex.ys);
          ex.label = Direction::y_to_x;
        }
        ds.examples[c * per_cell + j] = DatasetExample{std::move(ex), c};
      }
    } catch (const std::exception& e) {
      throw DegenerateExampleError("cell " + cells[c].name() + ": " +
                                   e.what());
    }
  });
  return ds;
}

}  // namespace exchpairs
