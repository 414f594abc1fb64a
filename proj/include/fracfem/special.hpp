#pragma once

#include <cmath>

namespace fracfem {

/// Euler's Gamma function.  glibc's tgamma is accurate to a few ulp on the
/// arguments used here (all in (-2, 8)).
inline double gamma_fn(double x) { return std::tgamma(x); }

/// 1/Gamma(x) with the entire-function convention 1/Gamma(-n) = 0.
inline double reciprocal_gamma(double x) {
  if (x <= 0.0) {
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-12 * std::max(1.0, std::abs(x))) return 0.0;
  }
  return 1.0 / std::tgamma(x);
}

inline double beta_fn(double a, double b) {
  if (a + b < 150.0) return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

/// Generalized binomial coefficient C(g, n).
inline double binomial(double g, int n) {
  double c = 1.0;
  for (int i = 0; i < n; ++i) c *= (g - i) / (i + 1);
  return c;
}

inline bool is_nonnegative_integer(double p) {
  return p >= 0.0 && p == std::floor(p);
}

}  // namespace fracfem
