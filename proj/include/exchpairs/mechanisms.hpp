#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "exchpairs/error.hpp"
#include "exchpairs/polyfit.hpp"
#include "exchpairs/priors.hpp"
#include "exchpairs/rng.hpp"

namespace exchpairs {

enum class MechanismKind {
  linear,
  piecewise_linear,
  exponential,
  logarithmic,
  inverse_proportional,
  brownian_like,
  polynomial,
  power_law,
};

inline constexpr MechanismKind kAllMechanisms[] = {
    MechanismKind::linear,        MechanismKind::piecewise_linear,
    MechanismKind::exponential,   MechanismKind::logarithmic,
    MechanismKind::inverse_proportional, MechanismKind::brownian_like,
    MechanismKind::polynomial,    MechanismKind::power_law,
};

inline const char* to_string(MechanismKind k) {
  switch (k) {
    case MechanismKind::linear: return "linear";
    case MechanismKind::piecewise_linear: return "piecewise_linear";
    case MechanismKind::exponential: return "exponential";
    case MechanismKind::logarithmic: return "logarithmic";
    case MechanismKind::inverse_proportional: return "inverse_proportional";
    case MechanismKind::brownian_like: return "brownian_like";
    case MechanismKind::polynomial: return "polynomial";
    case MechanismKind::power_law: return "power_law";
  }
  return "?";
}

inline MechanismKind mechanism_from_string(const std::string& s) {
  for (MechanismKind k : kAllMechanisms)
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown mechanism: " + s);
}

inline bool is_scalar_mechanism(MechanismKind k) {
  return k == MechanismKind::exponential || k == MechanismKind::logarithmic ||
         k == MechanismKind::inverse_proportional ||
         k == MechanismKind::power_law;
}

// Hyperparameters of the parameter-sampling layer. These are knobs of this
// implementation, recorded in every dataset manifest.
struct GenHyper {
  double mu_mu = 1.0;        // mean of the mu_psi draw
  double sigma_mu = 0.75;    // std of the mu_psi draw
  double mu_sigma = 1.0;     // mean of the sigma_psi draw
  double sigma_sigma = 0.5;  // std of the sigma_psi draw
  double gamma_m = 3.0;      // inverse-gamma shape for endpoint sigmas
  double gamma_v = 1.0;      // inverse-gamma scale for endpoint sigmas
  int max_k = 6;
  int max_o = 5;
  double momentum_p = 2.0;
  double delta_t = 0.0;
  bool delta_t_from_spacing = true;  // if set, slice spacing follows sorted x

  bool operator==(const GenHyper&) const = default;
};

// Per-example mechanism parameters. A single struct covers all eight kinds;
// fields not used by a kind keep their defaults. slice_phis/boundary_sigmas
// hold the per-slice draws for the piecewise kind (empty means "derive from
// phi/sigma0/sigma1").
struct MechanismParams {
  MechanismKind kind = MechanismKind::linear;
  double mu_psi = 1.0;
  double sigma_psi = 0.5;
  double mu0 = 0.0;
  double mu1 = 1.0;
  double sigma0 = 0.5;
  double sigma1 = 0.5;
  double phi = 0.78539816339744831;  // pi/4
  double gamma_m = 3.0;
  double gamma_v = 1.0;
  int k = 2;
  int max_k = 6;
  int o = 2;
  int max_o = 5;
  double p = 2.0;
  double delta_t = 0.0;
  bool delta_t_from_spacing = true;
  bool flip_y = false;
  bool flip_x = false;
  std::vector<double> slice_phis;       // piecewise: one angle per slice
  std::vector<double> boundary_sigmas;  // piecewise: one sigma per boundary

  bool operator==(const MechanismParams&) const = default;
};

namespace detail {

constexpr double kTwoPi = 6.2831853071795864769;
constexpr double kCosEps = 1e-3;   // |cos phi| below this means a near-vertical slope
constexpr double kDomainFloor = 0.05;  // min allowed x + a for log/inverse

inline double sample_angle(RandomStream& rng) {
  for (;;) {
    const double phi = rng.uniform(0.0, kTwoPi);
    if (std::abs(std::cos(phi)) >= kCosEps) return phi;
  }
}

inline double safe_tan(double phi) {
  if (std::abs(std::cos(phi)) < kCosEps)
    throw std::invalid_argument("mechanism: phi too close to a vertical slope");
  return std::tan(phi);
}

inline void check_finite(const std::vector<double>& v, const char* what) {
  for (double y : v)
    if (!std::isfinite(y))
      throw InternalConsistencyError(std::string(what) +
                                     ": non-finite output");
}

// Standardized psi (mean 0, std 1). Only needed when some scale multiplies
// it; callers skip the call when every scale is zero so that a constant psi
// stays usable there.
inline std::vector<double> zscores(const LatentDraw& psi) {
  return rescale(psi.values, 0.0, 1.0);
}

inline bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

// Shifts a upward so that min(base + a) reaches at least the domain floor.
inline void clamp_shift(std::vector<double>& a, const std::vector<double>& base) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) lo = std::min(lo, base[i] + a[i]);
  if (lo < kDomainFloor) {
    const double shift = kDomainFloor - lo;
    for (double& ai : a) ai += shift;
  }
}

}  // namespace detail

// y_i = e^{x_i a_i}, log(x_i + a_i), 1/(x_i + a_i), or x_i^{a_i} with
// a = rescale(psi; mu_psi, sigma_psi). Logarithmic and InverseProportional
// shift a so min(x + a) stays positive; PowerLaw uses the reflection
// 2 mu_psi - rescale(...) so that y increases in psi, and keeps a positive.
inline std::vector<double> scalar_mechanism(MechanismKind kind,
                                            const std::vector<double>& x,
                                            const LatentDraw& psi,
                                            const MechanismParams& params) {
  if (!is_scalar_mechanism(kind))
    throw std::invalid_argument("scalar_mechanism: kind is not scalar-family");
  if (x.size() != psi.values.size())
    throw std::invalid_argument("scalar_mechanism: size mismatch");
  std::vector<double> a = rescale(psi.values, params.mu_psi, params.sigma_psi);
  std::vector<double> y(x.size());
  switch (kind) {
    case MechanismKind::exponential:
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::exp(x[i] * a[i]);
      break;
    case MechanismKind::logarithmic:
      detail::clamp_shift(a, x);
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::log(x[i] + a[i]);
      break;
    case MechanismKind::inverse_proportional:
      detail::clamp_shift(a, x);
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = 1.0 / (x[i] + a[i]);
      break;
    case MechanismKind::power_law: {
      for (double& ai : a) ai = 2.0 * params.mu_psi - ai;
      const std::vector<double> zero(x.size(), 0.0);
      detail::clamp_shift(a, zero);
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::pow(x[i], a[i]);
      break;
    }
    default:
      break;
  }
  detail::check_finite(y, "scalar_mechanism");
  return y;
}

// y_i = a_i + (b_i - a_i) x_i with a = rescale(psi; mu0, sigma0) and
// b = rescale(psi; mu1, sigma1).
inline std::vector<double> linear_mechanism(const std::vector<double>& x,
                                            const LatentDraw& psi,
                                            const MechanismParams& params) {
  if (x.size() != psi.values.size())
    throw std::invalid_argument("linear_mechanism: size mismatch");
  const auto a = rescale(psi.values, params.mu0, params.sigma0);
  const auto b = rescale(psi.values, params.mu1, params.sigma1);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] = a[i] + (b[i] - a[i]) * x[i];
  detail::check_finite(y, "linear_mechanism");
  return y;
}

// Continuous piecewise-linear mechanism over k equal slices of [0,1].
// Boundary means follow mu_{j+1} = mu_j + tan(phi_j) (x_{j+1} - x_j), so
// adjacent slices share their boundary value at every psi rank. Boundary
// sigmas come from boundary_sigmas when provided (size k+1), otherwise they
// interpolate sigma0 -> sigma1 along x.
inline std::vector<double> piecewise_mechanism(const std::vector<double>& x,
                                               const LatentDraw& psi,
                                               const MechanismParams& params) {
  if (x.size() != psi.values.size())
    throw std::invalid_argument("piecewise_mechanism: size mismatch");
  const int k = params.k;
  if (k < 2) throw std::invalid_argument("piecewise_mechanism: k < 2");
  if (!params.slice_phis.empty() &&
      params.slice_phis.size() != static_cast<std::size_t>(k))
    throw std::invalid_argument("piecewise_mechanism: slice_phis size");
  if (!params.boundary_sigmas.empty() &&
      params.boundary_sigmas.size() != static_cast<std::size_t>(k) + 1)
    throw std::invalid_argument("piecewise_mechanism: boundary_sigmas size");

  std::vector<double> mu_b(k + 1), sig_b(k + 1);
  mu_b[0] = params.mu0;
  const double dx = 1.0 / static_cast<double>(k);
  for (int j = 0; j < k; ++j) {
    const double phi =
        params.slice_phis.empty() ? params.phi : params.slice_phis[j];
    mu_b[j + 1] = mu_b[j] + detail::safe_tan(phi) * dx;
  }
  for (int j = 0; j <= k; ++j) {
    const double xb = static_cast<double>(j) * dx;
    sig_b[j] = params.boundary_sigmas.empty()
                   ? params.sigma0 + (params.sigma1 - params.sigma0) * xb
                   : params.boundary_sigmas[j];
  }

  std::vector<double> z;
  if (!detail::all_zero(sig_b)) z = detail::zscores(psi);

  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    int s = static_cast<int>(x[i] * k);
    s = std::clamp(s, 0, k - 1);
    const double t = x[i] * k - s;
    const double zi = z.empty() ? 0.0 : z[i];
    const double lo = mu_b[s] + sig_b[s] * zi;
    const double hi = mu_b[s + 1] + sig_b[s + 1] * zi;
    y[i] = lo + (hi - lo) * t;
  }
  detail::check_finite(y, "piecewise_mechanism");
  return y;
}

// Random wandering path over one slice per sample: slice means follow
// mu_{j+1} ~ N(mu_j + d mu/dt * dt, sqrt(dt^p / p)) with the drift estimated
// from a local polynomial fit of the recent path; each sample's value is the
// psi z-score scaled by sigma0 around its slice mean. Fewer than 3 points
// fall back to the linear mechanism (the drift fit needs support).
inline std::vector<double> brownian_mechanism(const std::vector<double>& x,
                                              const LatentDraw& psi,
                                              const MechanismParams& params,
                                              RandomStream& rng) {
  if (x.size() != psi.values.size())
    throw std::invalid_argument("brownian_mechanism: size mismatch");
  const std::size_t n = x.size();
  if (n < 3) return linear_mechanism(x, psi, params);
  if (!(params.p > 0.0))
    throw std::invalid_argument("brownian_mechanism: p must be positive");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  std::vector<double> t(n);
  for (std::size_t j = 0; j < n; ++j)
    t[j] = params.delta_t_from_spacing ? x[order[j]]
                                       : static_cast<double>(j) * params.delta_t;

  std::vector<double> mu(n);
  mu[0] = params.mu0;
  for (std::size_t j = 1; j < n; ++j) {
    const double dt = t[j] - t[j - 1];
    const std::size_t w = std::min<std::size_t>(5, j);
    std::vector<double> tw(w), mw(w);
    for (std::size_t q = 0; q < w; ++q) {
      tw[q] = t[j - w + q] - t[j - 1];  // shifted so the fit point is 0
      mw[q] = mu[j - w + q];
    }
    double drift = 0.0;
    for (int deg = std::min<int>(2, static_cast<int>(w) - 1); deg >= 1; --deg) {
      try {
        drift = poly_derivative_eval(polyfit_lstsq(tw, mw, deg), 0.0);
        break;
      } catch (const InsufficientDataError&) {
        // duplicate times collapse the design; retry with a lower degree
      }
    }
    const double sd = std::sqrt(std::pow(dt, params.p) / params.p);
    mu[j] = rng.normal(mu[j - 1] + drift * dt, sd);
  }

  std::vector<double> z;
  if (params.sigma0 != 0.0) z = detail::zscores(psi);
  std::vector<double> y(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t i = order[j];
    y[i] = mu[j] + params.sigma0 * (z.empty() ? 0.0 : z[i]);
  }
  detail::check_finite(y, "brownian_mechanism");
  return y;
}

// Diagnostics from a polynomial_mechanism call (which knots were picked and
// the rescale targets attached to them).
struct PolyDetail {
  std::vector<double> knot_x;
  std::vector<double> knot_mu;
  std::vector<double> knot_sigma;
  int effective_order = 0;
};

// Per-sample interpolating polynomial: o+1 knots drawn from the distinct x
// values; knot j carries targets (mu_j, sigma_j) with mu_j on the tan(phi)
// trend line and sigma_j ~ Inv-Gamma(gamma_m, gamma_v). Sample i's curve
// interpolates mu_j + sigma_j z_i at every knot, so y_i = M(x_i) + z_i S(x_i)
// where M and S interpolate the targets.
inline std::vector<double> polynomial_mechanism(const std::vector<double>& x,
                                                const LatentDraw& psi,
                                                const MechanismParams& params,
                                                RandomStream& rng,
                                                PolyDetail* detail_out = nullptr) {
  if (x.size() != psi.values.size())
    throw std::invalid_argument("polynomial_mechanism: size mismatch");
  if (params.o < 2) throw std::invalid_argument("polynomial_mechanism: o < 2");

  std::vector<double> distinct = x;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  int o = params.o;
  if (distinct.size() < static_cast<std::size_t>(o) + 1) {
    o = static_cast<int>(distinct.size()) - 1;
    std::cerr << "polynomial_mechanism: only " << distinct.size()
              << " distinct x values; reducing order to " << o << "\n";
  }
  if (o < 1)
    throw DegenerateInputError("polynomial_mechanism: constant x");

  // Draw o+1 knots without replacement (partial Fisher-Yates), then sort.
  std::vector<std::size_t> idx(distinct.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (int j = 0; j <= o; ++j) {
    const auto pick = static_cast<std::size_t>(
        rng.uniform_int(j, static_cast<long long>(idx.size()) - 1));
    std::swap(idx[j], idx[pick]);
  }
  std::vector<double> knot_x(o + 1);
  for (int j = 0; j <= o; ++j) knot_x[j] = distinct[idx[j]];
  std::sort(knot_x.begin(), knot_x.end());

  const double slope = detail::safe_tan(params.phi);
  std::vector<double> knot_mu(o + 1), knot_sigma(o + 1);
  for (int j = 0; j <= o; ++j) {
    knot_mu[j] = params.mu0 + slope * knot_x[j];
    knot_sigma[j] = rng.inv_gamma(params.gamma_m, params.gamma_v);
  }

  const auto m_coeffs = interpolate_poly(knot_x, knot_mu);
  const auto s_coeffs = interpolate_poly(knot_x, knot_sigma);
  const auto z = detail::zscores(psi);

  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] = poly_eval(m_coeffs, x[i]) + z[i] * poly_eval(s_coeffs, x[i]);
  detail::check_finite(y, "polynomial_mechanism");

  if (detail_out) {
    detail_out->knot_x = knot_x;
    detail_out->knot_mu = knot_mu;
    detail_out->knot_sigma = knot_sigma;
    detail_out->effective_order = o;
  }
  return y;
}

inline std::vector<double> apply_mechanism(const std::vector<double>& x,
                                           const LatentDraw& psi,
                                           const MechanismParams& params,
                                           RandomStream& rng) {
  switch (params.kind) {
    case MechanismKind::linear: return linear_mechanism(x, psi, params);
    case MechanismKind::piecewise_linear:
      return piecewise_mechanism(x, psi, params);
    case MechanismKind::brownian_like:
      return brownian_mechanism(x, psi, params, rng);
    case MechanismKind::polynomial:
      return polynomial_mechanism(x, psi, params, rng);
    default: return scalar_mechanism(params.kind, x, psi, params);
  }
}

// Draws the per-example parameters for one mechanism kind. Sign flips are
// tossed for the scalar family only; the other kinds get their orientation
// from the slope angle or the random path.
inline MechanismParams sample_mechanism_params(MechanismKind kind,
                                               const GenHyper& hyper,
                                               RandomStream& rng) {
  MechanismParams p;
  p.kind = kind;
  p.gamma_m = hyper.gamma_m;
  p.gamma_v = hyper.gamma_v;
  p.max_k = hyper.max_k;
  p.max_o = hyper.max_o;
  p.p = hyper.momentum_p;
  p.delta_t = hyper.delta_t;
  p.delta_t_from_spacing = hyper.delta_t_from_spacing;

  if (is_scalar_mechanism(kind)) {
    p.mu_psi = rng.normal(hyper.mu_mu, hyper.sigma_mu);
    p.sigma_psi = rng.inv_gamma_mean_std(hyper.mu_sigma, hyper.sigma_sigma);
    p.flip_y = rng.bernoulli(0.5);
    p.flip_x = rng.bernoulli(0.5);
    return p;
  }

  switch (kind) {
    case MechanismKind::linear:
      p.phi = detail::sample_angle(rng);
      p.sigma0 = rng.inv_gamma(hyper.gamma_m, hyper.gamma_v);
      p.sigma1 = rng.inv_gamma(hyper.gamma_m, hyper.gamma_v);
      p.mu0 = 0.0;
      p.mu1 = std::tan(p.phi);
      break;
    case MechanismKind::piecewise_linear: {
      p.k = static_cast<int>(rng.uniform_int(2, hyper.max_k));
      p.slice_phis.resize(p.k);
      for (double& phi : p.slice_phis) phi = detail::sample_angle(rng);
      p.boundary_sigmas.resize(p.k + 1);
      for (double& s : p.boundary_sigmas)
        s = rng.inv_gamma(hyper.gamma_m, hyper.gamma_v);
      p.mu0 = 0.0;
      p.phi = p.slice_phis.front();
      p.sigma0 = p.boundary_sigmas.front();
      p.sigma1 = p.boundary_sigmas.back();
      double mu_end = p.mu0;
      for (double phi : p.slice_phis)
        mu_end += std::tan(phi) / static_cast<double>(p.k);
      p.mu1 = mu_end;
      break;
    }
    case MechanismKind::brownian_like:
      p.phi = detail::sample_angle(rng);  // used by the small-n fallback
      p.sigma0 = rng.inv_gamma(hyper.gamma_m, hyper.gamma_v);
      p.sigma1 = rng.inv_gamma(hyper.gamma_m, hyper.gamma_v);
      p.mu0 = 0.0;
      p.mu1 = std::tan(p.phi);
      break;
    case MechanismKind::polynomial:
      p.o = static_cast<int>(rng.uniform_int(2, hyper.max_o));
      p.phi = detail::sample_angle(rng);
      p.mu0 = 0.0;
      p.mu1 = std::tan(p.phi);
      break;
    default:
      break;
  }
  return p;
}

}  // namespace exchpairs
