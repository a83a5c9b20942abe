#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "exchpairs/error.hpp"
#include "exchpairs/rng.hpp"

namespace exchpairs {

enum class PriorKind { uniform, normal, rayleigh };

inline const char* to_string(PriorKind k) {
  switch (k) {
    case PriorKind::uniform: return "uniform";
    case PriorKind::normal: return "normal";
    case PriorKind::rayleigh: return "rayleigh";
  }
  return "?";
}

inline PriorKind prior_from_string(const std::string& s) {
  if (s == "uniform") return PriorKind::uniform;
  if (s == "normal") return PriorKind::normal;
  if (s == "rayleigh") return PriorKind::rayleigh;
  throw std::invalid_argument("unknown prior: " + s);
}

// A latent vector together with the prior it was drawn from. Values are kept
// on the unit interval (see sample_prior).
struct LatentDraw {
  PriorKind kind = PriorKind::uniform;
  std::vector<double> values;
};

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean: empty input");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Population standard deviation (divide by n).
inline double stddev_pop(const std::vector<double>& v) {
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

// Min-max scale to [0, 1]. A single value or an all-equal vector maps to 0.5,
// the midpoint of the degenerate range.
inline std::vector<double> unit_scale(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("unit_scale: empty input");
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it, hi = *hi_it;
  std::vector<double> out(v.size());
  if (hi == lo) {
    std::fill(out.begin(), out.end(), 0.5);
    return out;
  }
  const double span = hi - lo;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - lo) / span;
  return out;
}

// Affine map of v onto target sample mean mu and population std sigma.
// sigma = 0 collapses everything onto mu. Constant input cannot be spread out
// to a nonzero sigma and raises DegenerateInputError. The moments are
// accumulated over a value-sorted copy, so the map each element sees does not
// depend on element order (permuting the input permutes the output exactly).
inline std::vector<double> rescale(const std::vector<double>& v, double mu,
                                   double sigma) {
  if (v.empty()) throw std::invalid_argument("rescale: empty input");
  if (sigma < 0.0) throw std::invalid_argument("rescale: negative sigma");
  std::vector<double> out(v.size());
  if (sigma == 0.0) {
    std::fill(out.begin(), out.end(), mu);
    return out;
  }
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  const double m = mean(sorted);
  const double s = stddev_pop(sorted);
  if (s == 0.0)
    throw DegenerateInputError(
        "rescale: constant input cannot reach a nonzero target std");
  const double g = sigma / s;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = mu + g * (v[i] - m);
  return out;
}

inline double draw_prior_value(PriorKind kind, RandomStream& rng) {
  switch (kind) {
    case PriorKind::uniform: return rng.uniform01();
    case PriorKind::normal: return rng.normal();
    case PriorKind::rayleigh: return rng.rayleigh(1.0);
  }
  throw std::invalid_argument("draw_prior_value: bad kind");
}

// Draws n latent values from the base prior and min-max scales them to
// [0, 1]. Element i is drawn from rng.child(i), so the draw for a given slot
// does not depend on how many other slots there are or on their order; perm,
// when given, routes substream perm[i] to slot i.
inline LatentDraw sample_prior(PriorKind kind, std::size_t n,
                               const RandomStream& rng,
                               const std::vector<std::size_t>* perm = nullptr) {
  if (n == 0) throw std::invalid_argument("sample_prior: n must be positive");
  if (perm && perm->size() != n)
    throw std::invalid_argument("sample_prior: permutation size mismatch");
  std::vector<double> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream s = rng.child(perm ? (*perm)[i] : i);
    raw[i] = draw_prior_value(kind, s);
  }
  return LatentDraw{kind, unit_scale(raw)};
}

}  // namespace exchpairs
