#include "fracfem/assembly.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "fracfem/errors.hpp"
#include "fracfem/special.hpp"

namespace fracfem {

namespace {

constexpr std::array<double, 3> kSecond{1.0, -2.0, 1.0};
constexpr std::array<double, 5> kFourth{1.0, -4.0, 6.0, -4.0, 1.0};

// If `anchor` is a mesh node x_k, returns k.
std::optional<int> node_index(const Mesh& mesh, double anchor) {
  const double s = anchor * mesh.cells();
  const double k = std::round(s);
  if (std::abs(s - k) <= 1e-12 * std::max(1.0, s)) return static_cast<int>(k);
  return std::nullopt;
}

// (term, psi_i) for an interior hat, i in 1..m-1.
double term_against_hat(const Mesh& mesh, const Term& t, int i) {
  const double p = t.exponent;
  const auto k = node_index(mesh, t.anchor);
  if (k) {
    // psi_i = (1/h) sum_r c_r (x_{i-1+r} - x)_+ ; pairing each ramp with a
    // truncated power is a complete Beta integral.
    const double scale = t.coef * std::pow(mesh.h(), p + 1.0) / ((p + 1.0) * (p + 2.0));
    if (t.side == Side::Left) return scale * power_difference(kSecond, -1.0 - *k, p + 2.0, i);
    return scale * power_difference(kSecond, -1.0, p + 2.0, *k - i);
  }
  return inner_product(PowerSum({t}), nodal_hat(mesh, i).to_power_sum());
}

// (term, psi_0) for the left half-hat.
double term_against_left_half_hat(const Mesh& mesh, const Term& t) {
  if (t.side == Side::Left && t.anchor == 0.0) {
    const double p = t.exponent;
    return t.coef * std::pow(mesh.h(), p + 1.0) / ((p + 1.0) * (p + 2.0));
  }
  return inner_product(PowerSum({t}), nodal_hat(mesh, 0).to_power_sum());
}

void require_pde_order(const Formulation& form) { (void)FracOrder::pde(form.alpha.value()); }

}  // namespace

const char* to_string(DerivativeKind kind) {
  return kind == DerivativeKind::Caputo ? "caputo" : "riemann-liouville";
}

Potential Potential::constant(double c) {
  if (c == 0.0) return zero();
  return Potential([c](double) { return c; });
}

Formulation::Formulation(DerivativeKind k, FracOrder a, Potential pot)
    : kind(k), alpha(FracOrder::pde(a.value())), q(std::move(pot)) {}

double bilinear_form(const PowerSum& u, const PowerSum& v, FracOrder alpha, double tol) {
  const double a = FracOrder::pde(alpha.value()).value();
  const PowerSum smoothed = left_frac_integral(derivative(u), FracOrder::integral(2.0 - a));
  return inner_product(smoothed, derivative(v), tol);
}

Eigen::MatrixXd assemble_stiffness(const Mesh& mesh, const Formulation& form) {
  require_pde_order(form);
  const double alpha = form.alpha.value();
  const int n = mesh.interior();
  // A(phi_j, phi_i) depends on i - j only:
  //   -h^{1-alpha}/Gamma(4-alpha) * sum_r w_r (i-j-2+r)_+^{3-alpha}
  // with w the fourth-difference stencil.  It vanishes for j >= i + 2.
  const double scale = -std::pow(mesh.h(), 1.0 - alpha) / gamma_fn(4.0 - alpha);
  std::vector<double> toeplitz(n + 1);
  for (int d = -1; d < n; ++d) toeplitz[d + 1] = scale * power_difference(kFourth, -2.0, 3.0 - alpha, d);

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= std::min(i + 1, n - 1); ++j) K(i, j) = toeplitz[i - j + 1];

  if (form.kind == DerivativeKind::Caputo) {
    // A(phi_j, psi_0) is nonzero only for j = 1, where it equals `scale`.
    const CaputoTestBasis test(mesh, form.alpha);
    for (int i = 0; i < n; ++i) K(i, 0) -= test.ratio(i + 1) * scale;
  }
  return K;
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const Formulation& form, const PowerSum& f) {
  require_pde_order(form);
  const int n = mesh.interior();
  Eigen::VectorXd F = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    for (const auto& t : f.terms()) F(i) += term_against_hat(mesh, t, i + 1);

  if (form.kind == DerivativeKind::Caputo) {
    double left = 0.0;
    for (const auto& t : f.terms()) left += term_against_left_half_hat(mesh, t);
    const CaputoTestBasis test(mesh, form.alpha);
    for (int i = 0; i < n; ++i) F(i) -= test.ratio(i + 1) * left;
  }
  return F;
}

Eigen::MatrixXd assemble_potential(const Mesh& mesh, const Formulation& form, double tol) {
  require_pde_order(form);
  const int n = mesh.interior();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  if (form.q.is_zero()) return P;

  const int m = mesh.cells();
  const double h = mesh.h();
  // Nodal mass matrix over all m+1 hats; tridiagonal.
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m + 1, m + 1);
  for (int e = 0; e < m; ++e) {
    const double lo = mesh.node(e);
    const double hi = mesh.node(e + 1);
    auto left_shape = [&](double x) { return (hi - x) / h; };
    auto right_shape = [&](double x) { return (x - lo) / h; };
    const auto& q = form.q;
    const double m00 =
        integrate_singular([&](double x) { return q(x) * left_shape(x) * left_shape(x); }, lo, hi,
                           0.0, 0.0, tol);
    const double m01 =
        integrate_singular([&](double x) { return q(x) * left_shape(x) * right_shape(x); }, lo,
                           hi, 0.0, 0.0, tol);
    const double m11 =
        integrate_singular([&](double x) { return q(x) * right_shape(x) * right_shape(x); }, lo,
                           hi, 0.0, 0.0, tol);
    G(e, e) += m00;
    G(e, e + 1) += m01;
    G(e + 1, e) += m01;
    G(e + 1, e + 1) += m11;
  }
  P = G.block(1, 1, n, n);
  if (form.kind == DerivativeKind::Caputo) {
    const CaputoTestBasis test(mesh, form.alpha);
    for (int i = 0; i < n; ++i) P(i, 0) -= test.ratio(i + 1) * G(0, 1);
  }
  return P;
}

LinearSystem assemble_system(const Mesh& mesh, const Formulation& form, const PowerSum& f) {
  LinearSystem system;
  system.matrix = assemble_stiffness(mesh, form);
  if (!form.q.is_zero()) system.matrix += assemble_potential(mesh, form);
  system.rhs = assemble_load(mesh, form, f);
  return system;
}

const Eigen::VectorXd& solve(LinearSystem& system) {
  const auto& A = system.matrix;
  const auto& b = system.rhs;
  if (A.rows() != A.cols() || A.rows() != b.size())
    throw ParameterError("solve: system is not square or rhs has the wrong length");
  if (!A.allFinite() || !b.allFinite()) throw ParameterError("solve: non-finite entries");

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const Eigen::MatrixXd permuted = lu.permutationP() * A;
  const Eigen::MatrixXd& LU = lu.matrixLU();
  for (Eigen::Index k = 0; k < A.rows(); ++k) {
    const double row_scale = permuted.row(k).cwiseAbs().maxCoeff();
    if (!(std::abs(LU(k, k)) > kPivotTol * row_scale)) {
      std::ostringstream msg;
      msg << "solve: pivot " << LU(k, k) << " in row " << k << " below " << kPivotTol
          << " x row scale " << row_scale << " (system numerically singular)";
      throw SingularSystemError(msg.str());
    }
  }
  Eigen::VectorXd x = lu.solve(b);
  const double residual = (A * x - b).cwiseAbs().maxCoeff();
  const double a_norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  const double bound =
      1e-10 * (a_norm * x.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff());
  if (!(residual <= bound)) {
    std::ostringstream msg;
    msg << "solve: residual " << residual << " exceeds " << bound;
    throw SingularSystemError(msg.str());
  }
  system.solution = std::move(x);
  return *system.solution;
}

PiecewiseLinear solve_problem(const Mesh& mesh, const Formulation& form, const PowerSum& f) {
  LinearSystem system = assemble_system(mesh, form, f);
  const auto& c = solve(system);
  std::vector<double> values(mesh.cells() + 1, 0.0);
  for (int i = 0; i < mesh.interior(); ++i) values[i + 1] = c(i);
  return PiecewiseLinear(mesh.cells(), std::move(values));
}

}  // namespace fracfem
