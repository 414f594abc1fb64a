#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace fracfem {

/// Gauss rule on (-1,1) for the weight (1-t)^a (1+t)^b.
struct QuadRule {
  std::vector<double> nodes;    // strictly increasing, inside (-1,1)
  std::vector<double> weights;  // positive
  double a = 0.0;               // exponent of (1-t)
  double b = 0.0;               // exponent of (1+t)

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Total mass of the Jacobi weight, 2^(a+b+1) B(a+1, b+1).
double jacobi_weight_mass(double a, double b);

/// n-point Gauss-Jacobi rule built from the eigen-decomposition of the Jacobi
/// matrix (Golub-Welsch).  (a, b) = (0, 0) gives Gauss-Legendre.
/// Throws ParameterError for n < 1 or exponents <= -1.
QuadRule gauss_jacobi_rule(int n, double a, double b);

inline QuadRule gauss_legendre_rule(int n) { return gauss_jacobi_rule(n, 0.0, 0.0); }

/// Same as gauss_jacobi_rule but memoized; safe to call from several threads.
std::shared_ptr<const QuadRule> cached_jacobi_rule(int n, double a, double b);

using Integrand = std::function<double(double)>;

/// Default relative tolerance and bisection limit of integrate_singular.
inline constexpr double kDefaultTol = 1e-12;
inline constexpr int kMaxRefinementDepth = 20;

/// Integral of f over [lo, hi], where f(x) behaves like
/// (x-lo)^left_exp (hi-x)^right_exp times a smooth function.
///
/// Each panel is integrated with the Gauss-Jacobi rule matched to the
/// exponents it touches, at 16 and 32 nodes; a panel is accepted once the
/// two estimates agree to tol relative to the L1 size of the whole integral,
/// otherwise it is bisected (the halves inherit only their own endpoint
/// exponent).  Bisection stops after kMaxRefinementDepth levels with a
/// ConvergenceError carrying both estimates of the offending panel.
///
/// abs_floor, when positive, is an absolute error budget accepted in place
/// of the relative one whenever it is larger.  Composite callers use it to
/// spread a tolerance over pieces of very different size.
double integrate_singular(const Integrand& f, double lo, double hi, double left_exp = 0.0,
                          double right_exp = 0.0, double tol = kDefaultTol,
                          double abs_floor = 0.0);

/// Integral of f over [lo, hi] for integrands that near lo are a mixture of
/// powers (x-lo)^p, p >= min_exponent > -1, with no single dominant one.
///
/// Substitutes x = lo + (hi-lo) s^k with k chosen from min_exponent so that
/// every term becomes a high power of s, then integrates the result with
/// integrate_singular.
double integrate_graded(const Integrand& f, double lo, double hi, double min_exponent,
                        double tol = kDefaultTol, double abs_floor = 0.0);

}  // namespace fracfem
