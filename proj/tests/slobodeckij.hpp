#pragma once

// Double-integral seminorm of the zero extension of a piecewise linear e
// vanishing at 0 and 1:
//   S(e) = int_R int_R (e(x)-e(y))^2 / |x-y|^{1+a} dx dy
//        = int_0^1 int_0^1 ... + (2/a) int_0^1 e^2 (x^{-a} + (1-x)^{-a}) dx.
// The unit square is split into element pairs: equal elements in closed
// form, neighbours through a Duffy split of the shared corner, the rest with
// a tensor Gauss rule.

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <vector>

#include "oracle.hpp"

namespace oracle {

inline double slobodeckij(const std::vector<double>& v, double a) {
  using G = boost::math::quadrature::gauss<double, 30>;
  const int m = static_cast<int>(v.size()) - 1;
  const double h = 1.0 / m;
  std::vector<double> s(m);
  for (int k = 0; k < m; ++k) s[k] = (v[k + 1] - v[k]) / h;
  auto e = [&](double x) {
    const int k = std::min(static_cast<int>(x * m), m - 1);
    return v[k] + s[k] * (x - k * h);
  };

  double square = 0.0;
  for (int k = 0; k < m; ++k) {
    // Same element: s^2 |x-y|^{1-a} over a square of side h.
    square += s[k] * s[k] * 2 * std::pow(h, 3 - a) / ((2 - a) * (3 - a));
  }
  for (int k = 0; k + 1 < m; ++k) {
    // x = x_{k+1} - u in element k, y = x_{k+1} + w in element k+1;
    // e(y) - e(x) = s_k u + s_{k+1} w and |x-y| = u + w.  On each half of
    // the square the radial integral of r^{2-a} is exact.
    const double s1 = s[k], s2 = s[k + 1];
    const double radial = std::pow(h, 3 - a) / (3 - a);
    const double t1 = G::integrate(
        [&](double t) { return std::pow(s1 + s2 * t, 2) / std::pow(1 + t, 1 + a); }, 0.0, 1.0);
    const double t2 = G::integrate(
        [&](double t) { return std::pow(s1 * t + s2, 2) / std::pow(1 + t, 1 + a); }, 0.0, 1.0);
    square += 2 * radial * (t1 + t2);
  }
  for (int k = 0; k < m; ++k)
    for (int l = k + 2; l < m; ++l) {
      const double inner = G::integrate(
          [&](double x) {
            return G::integrate(
                [&](double y) { return std::pow(e(x) - e(y), 2) / std::pow(y - x, 1 + a); },
                l * h, (l + 1) * h);
          },
          k * h, (k + 1) * h);
      square += 2 * inner;
    }

  // Boundary part in closed form: on each element e is d0 + d1 y in the
  // distance y to the end, and int (d0 + d1 y)^2 y^{-a} dy is elementary.
  auto weighted = [a](double d0, double d1, double lo, double hi) {
    auto power = [](double c, double p, double lo, double hi) {
      return c == 0.0 ? 0.0 : c * (std::pow(hi, p + 1) - std::pow(lo, p + 1)) / (p + 1);
    };
    return power(d0 * d0, -a, lo, hi) + power(2 * d0 * d1, 1 - a, lo, hi) +
           power(d1 * d1, 2 - a, lo, hi);
  };
  double boundary = 0.0;
  for (int k = 0; k < m; ++k) {
    const double lo = k * h, hi = (k + 1) * h;
    boundary += weighted(v[k] - s[k] * lo, s[k], lo, hi);
    const double ylo = (m - k - 1) * h, yhi = (m - k) * h;
    boundary += weighted(v[k + 1] + s[k] * ylo, -s[k], ylo, yhi);
  }
  return square + 2.0 / a * boundary;
}

}  // namespace oracle
