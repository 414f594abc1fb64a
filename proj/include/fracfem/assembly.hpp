#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>

#include "fracfem/femspace.hpp"
#include "fracfem/fracpoly.hpp"

namespace fracfem {

enum class DerivativeKind { RiemannLiouville, Caputo };

const char* to_string(DerivativeKind kind);

/// Potential q in -D^alpha u + q u = f.  The zero potential is a distinct
/// state so assembly can skip quadrature altogether.
class Potential {
 public:
  static Potential zero() { return Potential(); }
  static Potential constant(double c);
  explicit Potential(std::function<double(double)> q) : q_(std::move(q)) {}

  bool is_zero() const { return !q_; }
  double operator()(double x) const { return q_ ? q_(x) : 0.0; }

 private:
  Potential() = default;
  std::function<double(double)> q_;
};

struct Formulation {
  DerivativeKind kind = DerivativeKind::RiemannLiouville;
  FracOrder alpha = FracOrder::pde(1.5);
  Potential q = Potential::zero();

  Formulation(DerivativeKind k, FracOrder a, Potential pot = Potential::zero());
};

struct LinearSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  std::optional<Eigen::VectorXd> solution;  // trial coefficients u_h(x_1..x_{m-1})
};

/// A(u, v) = (I^{2-alpha} u', v') for u with u(0) = 0.  Generic route through
/// the truncated-power algebra; used for identities and cross-checks.
double bilinear_form(const PowerSum& u, const PowerSum& v, FracOrder alpha,
                     double tol = kDefaultTol);

/// Entry (i, j) = A(phi_j, t_i) with t_i = phi_i (Riemann-Liouville) or
/// eta_i (Caputo), 0-based over the interior nodes.  Closed form, no
/// quadrature.
Eigen::MatrixXd assemble_stiffness(const Mesh& mesh, const Formulation& form);

/// Entry i = (f, t_i).
Eigen::VectorXd assemble_load(const Mesh& mesh, const Formulation& form, const PowerSum& f);

/// Entry (i, j) = (q phi_j, t_i), element-wise Gauss-Legendre with doubling.
Eigen::MatrixXd assemble_potential(const Mesh& mesh, const Formulation& form,
                                   double tol = kDefaultTol);

LinearSystem assemble_system(const Mesh& mesh, const Formulation& form, const PowerSum& f);

/// Relative pivot threshold of solve().
inline constexpr double kPivotTol = 1e-14;

/// Dense LU with partial pivoting.  Throws SingularSystemError when a pivot
/// falls below kPivotTol times the scale of its row, or when the residual
/// check fails.
const Eigen::VectorXd& solve(LinearSystem& system);

/// Assemble, solve and return u_h with its zero boundary values.
PiecewiseLinear solve_problem(const Mesh& mesh, const Formulation& form, const PowerSum& f);

}  // namespace fracfem
