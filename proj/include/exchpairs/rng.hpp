#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace exchpairs {

namespace detail {

// SplitMix64 finalizer; used to spread seeds before they reach the engine and
// to derive child stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace detail

// Deterministic random stream with hierarchical substream derivation.
//
// The engine is std::mt19937_64, whose output sequence for a given seed is
// fixed by the standard, and every distribution transform is implemented here
// rather than taken from <random>, so draws are bit-identical across
// compilers and platforms. child(tag) derives an independent stream from the
// parent's seed without advancing the parent; the same (seed, tag path)
// always yields the same stream.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed)
      : seed_(seed), engine_(detail::mix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  RandomStream child(std::uint64_t tag) const {
    return RandomStream(
        detail::mix64(seed_ ^ detail::mix64(tag + 0x632BE59BD9B4E019ull)));
  }

  RandomStream child(std::uint64_t a, std::uint64_t b) const {
    return child(a).child(b);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Uniform integer on [lo, hi], inclusive, by rejection (unbiased).
  long long uniform_int(long long lo, long long hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
    const std::uint64_t range =
        static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1ull;
    if (range == 0) return static_cast<long long>(next_u64());  // full range
    std::uint64_t x, r;
    do {
      x = next_u64();
      r = x % range;
    } while (x - r > std::uint64_t(0) - range);
    return lo + static_cast<long long>(r);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Standard normal via Box-Muller. No cached spare: each call consumes a
  // fresh pair of uniforms, which keeps substream replay simple.
  double normal() {
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double normal(double mu, double sigma) { return mu + sigma * normal(); }

  // Rayleigh with scale sigma via inverse CDF; uniform01 < 1, so the log
  // argument stays positive.
  double rayleigh(double sigma) {
    return sigma * std::sqrt(-2.0 * std::log(1.0 - uniform01()));
  }

  // Gamma(shape, rate) by Marsaglia-Tsang squeeze; shape < 1 is boosted via
  // Gamma(shape + 1) and a uniform power.
  double gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0))
      throw std::invalid_argument("gamma: shape and rate must be positive");
    if (shape < 1.0) {
      double u = 1.0 - uniform01();  // (0, 1]
      return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform01();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
        return d * v / rate;
    }
  }

  // Inverse-gamma with the given shape and scale: 1 / Gamma(shape, rate=scale).
  double inv_gamma(double shape, double scale) {
    return 1.0 / gamma(shape, scale);
  }

  // Inverse-gamma parameterized by its mean and standard deviation.
  double inv_gamma_mean_std(double mean, double sd) {
    if (!(mean > 0.0) || !(sd > 0.0))
      throw std::invalid_argument(
          "inv_gamma_mean_std: mean and sd must be positive");
    const double shape = 2.0 + (mean / sd) * (mean / sd);
    const double scale = mean * (shape - 1.0);
    return inv_gamma(shape, scale);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace exchpairs
