#pragma once

#include <vector>

#include "fracfem/assembly.hpp"
#include "fracfem/femspace.hpp"
#include "fracfem/fracpoly.hpp"

namespace fracfem {

struct ErrorRecord {
  int m = 0;
  double h = 0.0;
  double l2_error = 0.0;
  /// sqrt(A(e,e)), the error in the energy norm; this is the quantity the
  /// convergence tables report as the H^{alpha/2} error.
  double halpha_error = 0.0;
  /// |e|_{H^{alpha/2}} = sqrt(A(e,e) / cos((1-alpha/2) pi)).
  double seminorm = 0.0;
  /// (1/Gamma(alpha)) (w, e), w = x^{alpha-1} (Riemann-Liouville) or x (Caputo).
  double coefficient = 0.0;
};

/// ||u - u_h||_{L2}.  Integrates e^2 element by element, so no cancellation
/// between (u,u) and (u_h,u_h) can occur; the first and last elements use a
/// graded substitution against endpoint singularities of u.
double l2_error(const PowerSum& u_exact, const PiecewiseLinear& u_h, double tol = kDefaultTol);

/// A(e, e) = (I^{2-alpha} e', e') for e = u - u_h, evaluated pointwise from
/// e itself.  u_exact must consist of Left terms anchored at 0, vanish at 0,
/// and u_h must vanish at both ends.
double energy_form(const PowerSum& u_exact, const PiecewiseLinear& u_h, FracOrder alpha,
                   double tol = kDefaultTol);

/// sqrt(A(e,e)).
double energy_norm_error(const PowerSum& u_exact, const PiecewiseLinear& u_h, FracOrder alpha,
                         double tol = kDefaultTol);

/// |e|_{H^{alpha/2}} through the energy identity A(e,e) = cos((1-alpha/2) pi) |e|^2.
double energy_error(const PowerSum& u_exact, const PiecewiseLinear& u_h, FracOrder alpha,
                    double tol = kDefaultTol);

/// The same two quantities by bilinear expansion through the truncated-power
/// algebra.  Suffers cancellation once the error is small; meant for cross
/// checks on coarse meshes.
double l2_error_expanded(const PowerSum& u_exact, const PiecewiseLinear& u_h,
                         double tol = kDefaultTol);
double energy_form_expanded(const PowerSum& u_exact, const PiecewiseLinear& u_h, FracOrder alpha,
                            double tol = kDefaultTol);

/// Weight of (1-x)^{alpha-1} in the adjoint solution with source e; signed.
double singular_coefficient(const PowerSum& u_exact, const PiecewiseLinear& u_h, FracOrder alpha,
                            DerivativeKind kind, double tol = kDefaultTol);

/// L2 norm and sqrt(A(v,v)) of a piecewise linear v vanishing at both ends,
/// exactly, from the mass and stiffness matrices of its own mesh.
struct DiscreteNorms {
  double l2 = 0.0;
  double energy = 0.0;
};
DiscreteNorms discrete_norms(const PiecewiseLinear& v, FracOrder alpha);

/// v_coarse - v_fine as a piecewise linear on the fine mesh, which must be a
/// refinement of the coarse one.
PiecewiseLinear difference_on_fine(const PiecewiseLinear& coarse, const PiecewiseLinear& fine);

ErrorRecord measure(const PowerSum& u_exact, const PiecewiseLinear& u_h, FracOrder alpha,
                    DerivativeKind kind, double tol = kDefaultTol);

struct RateSummary {
  std::vector<double> per_step;  // log2(e_k / e_{k+1})
  double fitted = 0.0;           // least-squares slope of log e against log h
};

/// Rates from a halving sequence of mesh sizes.  Throws UndefinedRateError on
/// a zero or non-finite error and ParameterError unless every step halves h.
RateSummary convergence_rates(const std::vector<double>& h, const std::vector<double>& errors);

/// Least-squares slope over the last `count` levels (all of them if fewer).
double fitted_rate(const std::vector<double>& h, const std::vector<double>& errors,
                   std::size_t count = 4);

}  // namespace fracfem
