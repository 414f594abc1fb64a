#pragma once

// Matrix and vector entries of the discrete problems recomputed from their
// defining integrals by nested quadrature.

#include <algorithm>
#include <cmath>
#include <functional>

#include "oracle.hpp"

namespace oracle {

// (1/Gamma(2-a)) int_0^x (x-s)^{1-a} phi_j'(s) ds for the interior hat j,
// integrated in t = x - s so that the kernel's singular end is exact.
inline double smoothed_hat_slope(int m, double a, int j, double x) {
  const double lo = std::max(0.0, (j - 1.0) / m);
  if (x <= lo) return 0.0;
  const double t_lo = std::max(0.0, x - (j + 1.0) / m), t_hi = x - lo;
  std::vector<double> breaks;
  for (int k = j + 1; k >= j - 1; --k)
    if (x - double(k) / m > t_lo && x - double(k) / m < t_hi) breaks.push_back(x - double(k) / m);
  return integrate_split(
             [&](double t) { return t <= 0.0 ? 0.0 : std::pow(t, 1 - a) * hat_slope(m, j, x - t); },
             t_lo, t_hi, breaks, 1) /
         std::tgamma(2 - a);
}

// A(phi_j, psi_i) = (I^{2-a} phi_j', psi_i'), i = 0..m-1 (0 is the left half hat).
inline double hat_form(int m, double a, int j, int i) {
  double sum = 0.0;
  for (int e = std::max(i - 1, 0); e <= i; ++e) {
    const double lo = double(e) / m, hi = double(e + 1) / m;
    const double slope = hat_slope(m, i, 0.5 * (lo + hi));
    sum += slope * integrate([&](double x) { return smoothed_hat_slope(m, a, j, x); }, lo, hi);
  }
  return sum;
}

// mu_i = (x^{1-a}, psi_i).
inline double moment(int m, double a, int i) {
  const double lo = std::max(0.0, (i - 1.0) / m), hi = (i + 1.0) / m;
  return integrate_split([&](double x) { return std::pow(x, 1 - a) * hat(m, i, x); }, lo, hi,
                   {double(i) / m});
}

// (f, psi_i), i = 0..m-1; `kinks` are extra points where f is not smooth.
inline double hat_load(int m, const std::function<double(double)>& f, int i,
                       std::vector<double> kinks = {}) {
  const double lo = std::max(0.0, (i - 1.0) / m), hi = (i + 1.0) / m;
  kinks.push_back(double(i) / m);
  std::sort(kinks.begin(), kinks.end());
  return integrate_split([&](double x) { return f(x) * hat(m, i, x); }, lo, hi, kinks);
}

// Entry (row, col), 0-based over interior nodes, of the stiffness matrix.
inline double stiffness(int m, double a, bool caputo, int row, int col) {
  const double v = hat_form(m, a, col + 1, row + 1);
  if (!caputo) return v;
  return v - moment(m, a, row + 1) / moment(m, a, 0) * hat_form(m, a, col + 1, 0);
}

inline double load(int m, double a, bool caputo, const std::function<double(double)>& f,
                   int row, const std::vector<double>& kinks = {}) {
  const double v = hat_load(m, f, row + 1, kinks);
  if (!caputo) return v;
  return v - moment(m, a, row + 1) / moment(m, a, 0) * hat_load(m, f, 0, kinks);
}

}  // namespace oracle
