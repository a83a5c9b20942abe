#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "exchpairs/error.hpp"

namespace exchpairs {

// Horner evaluation; coeffs[k] multiplies x^k.
inline double poly_eval(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k > 0; --k) acc = acc * x + coeffs[k - 1];
  return acc;
}

inline double poly_derivative_eval(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k > 1; --k)
    acc = acc * x + coeffs[k - 1] * static_cast<double>(k - 1);
  return acc;
}

namespace detail {

inline Eigen::MatrixXd vandermonde(const std::vector<double>& xs, int degree) {
  Eigen::MatrixXd v(xs.size(), degree + 1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double p = 1.0;
    for (int j = 0; j <= degree; ++j) {
      v(static_cast<Eigen::Index>(i), j) = p;
      p *= xs[i];
    }
  }
  return v;
}

}  // namespace detail

// Coefficients of the unique degree-(n-1) polynomial through (xs[i], ys[i]).
// xs must be pairwise distinct.
inline std::vector<double> interpolate_poly(const std::vector<double>& xs,
                                            const std::vector<double>& ys) {
  if (xs.empty() || xs.size() != ys.size())
    throw std::invalid_argument("interpolate_poly: bad sizes");
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      if (xs[i] == xs[j])
        throw std::invalid_argument("interpolate_poly: duplicate x");
  const auto v = detail::vandermonde(xs, static_cast<int>(xs.size()) - 1);
  Eigen::Map<const Eigen::VectorXd> b(ys.data(), static_cast<Eigen::Index>(ys.size()));
  Eigen::VectorXd c = v.colPivHouseholderQr().solve(b);
  return std::vector<double>(c.data(), c.data() + c.size());
}

// Least-squares polynomial fit. Throws InsufficientDataError when there are
// fewer rows than coefficients or the design matrix is rank deficient.
inline std::vector<double> polyfit_lstsq(const std::vector<double>& xs,
                                         const std::vector<double>& ys,
                                         int degree) {
  if (degree < 0) throw std::invalid_argument("polyfit_lstsq: negative degree");
  if (xs.size() != ys.size())
    throw std::invalid_argument("polyfit_lstsq: size mismatch");
  const std::size_t want = static_cast<std::size_t>(degree) + 1;
  if (xs.size() < want)
    throw InsufficientDataError("polyfit_lstsq: fewer samples than coefficients");
  const auto v = detail::vandermonde(xs, degree);
  auto qr = v.colPivHouseholderQr();
  if (qr.rank() < static_cast<Eigen::Index>(want))
    throw InsufficientDataError("polyfit_lstsq: rank-deficient design");
  Eigen::Map<const Eigen::VectorXd> b(ys.data(), static_cast<Eigen::Index>(ys.size()));
  Eigen::VectorXd c = qr.solve(b);
  return std::vector<double>(c.data(), c.data() + c.size());
}

}  // namespace exchpairs
