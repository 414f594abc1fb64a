#include "fracfem/metrics.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <sstream>

#include "fracfem/errors.hpp"
#include "fracfem/special.hpp"

namespace fracfem {

namespace {

// Node count of the fixed rules used on elements that do not touch a
// singular endpoint.  There every integrand is analytic on a neighbourhood at
// least one element wide; the Bernstein-ellipse bound puts the rule error
// near 1e-40 relative, far below rounding.
constexpr int kElementNodes = 32;

bool is_integer(double p) { return std::abs(p - std::round(p)) < 1e-12; }

// Smallest non-integer exponent anchored at `point`, or 1 when there is none.
// Integer powers are polynomials and need no grading; a non-integer power,
// even a mild one like x^{7/3}, costs Gauss-Legendre several digits.
double endpoint_exponent(const PowerSum& f, double point) {
  double lowest = 1.0;
  bool found = false;
  for (const auto& t : f.terms()) {
    if (t.anchor != point || is_integer(t.exponent)) continue;
    lowest = found ? std::min(lowest, t.exponent) : t.exponent;
    found = true;
  }
  return lowest;
}

// Every term must be singular at an end of the interval only.
void require_end_anchors(const PowerSum& u, const char* what) {
  for (const auto& t : u.terms()) {
    const bool at_end = (t.side == Side::Left && t.anchor == 0.0) ||
                        (t.side == Side::Right && t.anchor == 1.0) || is_integer(t.exponent);
    if (!at_end)
      throw ParameterError(std::string(what) +
                           ": exact solution has a non-integer power anchored inside (0,1)");
  }
}

// Integral over [0,1] of g, element by element.  Interior elements use the
// fixed rule; the first and last element use the graded integrator when u
// has non-integer powers anchored there.
//
// Adaptive tolerances are absolute, tol times the L1 norm of g over the
// whole interval.  Where the error is orders of magnitude below u, g is
// computed from e = u - u_h with rounding noise far above tol relative to
// the element's own integral, so a per-element relative target could not
// be met.
double element_sum(const Mesh& mesh, const Integrand& g, double left_exp, double right_exp,
                   double tol) {
  const int m = mesh.cells();
  const bool graded_left = !is_integer(left_exp);
  const bool graded_right = !is_integer(right_exp);
  const auto rule = cached_jacobi_rule(kElementNodes, 0.0, 0.0);
  const double half = 0.5 * mesh.h();

  double total = 0.0, magnitude = 0.0;
  for (int j = 0; j < m; ++j) {
    double value = 0.0, size = 0.0;
    for (int q = 0; q < rule->size(); ++q) {
      const double v = rule->weights[q] * g(mesh.node(j) + half * (1.0 + rule->nodes[q]));
      value += v;
      size += std::abs(v);
    }
    magnitude += half * size;
    if ((j == 0 && graded_left) || (j == m - 1 && graded_right)) continue;
    total += half * value;
  }
  const double floor = tol * magnitude;
  if (graded_left) total += integrate_graded(g, 0.0, mesh.h(), left_exp, tol, floor);
  if (graded_right) {
    const double lo = mesh.node(m - 1);
    auto mirrored = [&](double y) { return g(lo + 1.0 - y); };
    total += integrate_graded(mirrored, lo, 1.0, right_exp, tol, floor);
  }
  return total;
}

void require_matching_ends(const PowerSum& u, const PiecewiseLinear& u_h) {
  const auto& v = u_h.values();
  if (v.front() != 0.0 || v.back() != 0.0)
    throw ParameterError("energy error: the discrete solution must vanish at both ends");
  for (const auto& t : u.terms())
    if (t.side != Side::Left || t.anchor != 0.0)
      throw ParameterError("energy error: exact solution must be a sum of powers of x, got " +
                           u.to_string());
  if (std::abs(evaluate(u, 0.0)) > 1e-12)
    throw ParameterError("energy error: exact solution must vanish at 0");
}

}  // namespace

double l2_error(const PowerSum& u_exact, const PiecewiseLinear& u_h, double tol) {
  require_end_anchors(u_exact, "l2_error");
  const Mesh mesh(u_h.cells());
  auto square = [&](double x) {
    const double e = u_exact(x) - u_h(x);
    return e * e;
  };
  const double s = element_sum(mesh, square, endpoint_exponent(u_exact, 0.0),
                               endpoint_exponent(u_exact, 1.0), tol);
  return std::sqrt(std::max(s, 0.0));
}

double energy_form(const PowerSum& u_exact, const PiecewiseLinear& u_h, FracOrder alpha,
                   double tol) {
  const double a = FracOrder::pde(alpha.value()).value();
  require_matching_ends(u_exact, u_h);

  const Mesh mesh(u_h.cells());
  const int m = mesh.cells();
  const double h = mesh.h();
  const double beta = 2.0 - a;
  const double inv_gamma = 1.0 / gamma_fn(3.0 - a);

  const PowerSum du = derivative(u_exact);
  const PowerSum smoothed_u = left_frac_integral(du, FracOrder::integral(beta));

  // u_h' = sum_k d_k (x - x_k)_+^0, d_k the slope jumps.
  std::vector<double> slope(m), jump(m);
  for (int k = 0; k < m; ++k) {
    slope[k] = u_h.slope(k);
    jump[k] = k == 0 ? slope[0] : slope[k] - slope[k - 1];
  }

  // Elements j >= 1, local coordinate tau in (0,1), x = x_j + h tau.
  //   I^{2-alpha} u_h'(x) = c sum_{k<=j} d_k (j - k + tau)^beta,  c = h^beta / Gamma(3-alpha)
  // The k = j term is singular at tau = 0 and is paired with a Gauss-Jacobi
  // rule; the rest is analytic on the element.  (d + tau)^beta is tabulated
  // once per offset d, which keeps the whole sum O(m^2) without pow calls.
  const auto gl = cached_jacobi_rule(kElementNodes, 0.0, 0.0);
  const auto gj = cached_jacobi_rule(kElementNodes, 0.0, beta);
  const int nq = kElementNodes;
  std::vector<double> tau_gl(nq), w_gl(nq), tau_gj(nq), w_gj(nq);
  for (int q = 0; q < nq; ++q) {
    tau_gl[q] = 0.5 * (gl->nodes[q] + 1.0);
    w_gl[q] = 0.5 * gl->weights[q];
    tau_gj[q] = 0.5 * (gj->nodes[q] + 1.0);
    w_gj[q] = std::pow(0.5, beta + 1.0) * gj->weights[q];
  }
  std::vector<double> table(static_cast<std::size_t>(m) * nq);
  for (int d = 1; d < m; ++d)
    for (int q = 0; q < nq; ++q) table[static_cast<std::size_t>(d) * nq + q] = std::pow(d + tau_gl[q], beta);

  const double c = std::pow(h, beta) * inv_gamma;
  double rest = 0.0, rest_size = 0.0;
  std::vector<double> far(nq);
  for (int j = 1; j < m; ++j) {
    std::fill(far.begin(), far.end(), 0.0);
    for (int k = 0; k < j; ++k) {
      const double* row = &table[static_cast<std::size_t>(j - k) * nq];
      for (int q = 0; q < nq; ++q) far[q] += jump[k] * row[q];
    }
    const double x0 = mesh.node(j);
    double smooth = 0.0;
    for (int q = 0; q < nq; ++q) {
      const double x = x0 + h * tau_gl[q];
      smooth += w_gl[q] * (smoothed_u(x) - c * far[q]) * (du(x) - slope[j]);
    }
    double self = 0.0;
    for (int q = 0; q < nq; ++q) self += w_gj[q] * (du(x0 + h * tau_gj[q]) - slope[j]);
    rest += h * (smooth - c * jump[j] * self);
    rest_size += h * (std::abs(smooth) + std::abs(c * jump[j] * self));
  }

  // First element: every factor is singular at the origin.
  auto g = [&](double x) {
    const double w = smoothed_u(x) - jump[0] * std::pow(x, beta) * inv_gamma;
    return w * (du(x) - slope[0]);
  };
  const double p = std::min({0.0, beta, endpoint_exponent(smoothed_u, 0.0)}) +
                   std::min(0.0, endpoint_exponent(du, 0.0));
  const double first = integrate_graded(g, 0.0, h, std::max(p, -0.999), tol, tol * rest_size);
  return first + rest;
}

double energy_norm_error(const PowerSum& u_exact, const PiecewiseLinear& u_h, FracOrder alpha,
                         double tol) {
  return std::sqrt(std::max(energy_form(u_exact, u_h, alpha, tol), 0.0));
}

double energy_error(const PowerSum& u_exact, const PiecewiseLinear& u_h, FracOrder alpha,
                    double tol) {
  const double a = FracOrder::pde(alpha.value()).value();
  const double cosine = std::cos((1.0 - a / 2.0) * std::numbers::pi);
  return std::sqrt(std::max(energy_form(u_exact, u_h, alpha, tol), 0.0) / cosine);
}

double l2_error_expanded(const PowerSum& u_exact, const PiecewiseLinear& u_h, double tol) {
  const double s = inner_product(u_exact, u_exact, tol) - 2.0 * inner_product(u_h, u_exact, tol) +
                   inner_product(u_h, u_h, tol);
  return std::sqrt(std::max(s, 0.0));
}

double energy_form_expanded(const PowerSum& u_exact, const PiecewiseLinear& u_h, FracOrder alpha,
                            double tol) {
  const PowerSum e = u_exact - u_h.to_power_sum();
  return bilinear_form(e, e, alpha, tol);
}

double singular_coefficient(const PowerSum& u_exact, const PiecewiseLinear& u_h, FracOrder alpha,
                            DerivativeKind kind, double tol) {
  const double a = FracOrder::pde(alpha.value()).value();
  require_end_anchors(u_exact, "singular_coefficient");
  const Mesh mesh(u_h.cells());
  const double p = kind == DerivativeKind::Caputo ? 1.0 : a - 1.0;
  auto g = [&](double x) { return std::pow(x, p) * (u_exact(x) - u_h(x)); };
  const double ue = endpoint_exponent(u_exact, 0.0);
  const double left = is_integer(p) ? ue : std::min(p, ue);
  const double s = element_sum(mesh, g, left, endpoint_exponent(u_exact, 1.0), tol);
  return s / gamma_fn(a);
}

DiscreteNorms discrete_norms(const PiecewiseLinear& v, FracOrder alpha) {
  const auto& values = v.values();
  if (values.front() != 0.0 || values.back() != 0.0)
    throw ParameterError("discrete_norms: function must vanish at both ends");
  const Mesh mesh(v.cells());
  const int n = mesh.interior();
  const Eigen::Map<const Eigen::VectorXd> c(values.data() + 1, n);
  const Eigen::MatrixXd K =
      assemble_stiffness(mesh, Formulation(DerivativeKind::RiemannLiouville, alpha));
  double mass = 0.0;
  for (int i = 0; i < n; ++i) {
    mass += 4.0 * c(i) * c(i);
    if (i + 1 < n) mass += 2.0 * c(i) * c(i + 1);
  }
  mass *= mesh.h() / 6.0;
  const double form = c.dot(K * c);
  return {std::sqrt(std::max(mass, 0.0)), std::sqrt(std::max(form, 0.0))};
}

PiecewiseLinear difference_on_fine(const PiecewiseLinear& coarse, const PiecewiseLinear& fine) {
  if (fine.cells() % coarse.cells() != 0)
    throw ParameterError("difference_on_fine: meshes are not nested");
  std::vector<double> d(fine.cells() + 1);
  for (int j = 0; j <= fine.cells(); ++j) d[j] = coarse(fine.node(j)) - fine.values()[j];
  return PiecewiseLinear(fine.cells(), std::move(d));
}

ErrorRecord measure(const PowerSum& u_exact, const PiecewiseLinear& u_h, FracOrder alpha,
                    DerivativeKind kind, double tol) {
  ErrorRecord r;
  r.m = u_h.cells();
  r.h = u_h.h();
  r.l2_error = l2_error(u_exact, u_h, tol);
  const double a = FracOrder::pde(alpha.value()).value();
  const double form = std::max(energy_form(u_exact, u_h, alpha, tol), 0.0);
  r.halpha_error = std::sqrt(form);
  r.seminorm = std::sqrt(form / std::cos((1.0 - a / 2.0) * std::numbers::pi));
  r.coefficient = singular_coefficient(u_exact, u_h, alpha, kind, tol);
  return r;
}

RateSummary convergence_rates(const std::vector<double>& h, const std::vector<double>& errors) {
  if (h.size() != errors.size())
    throw ParameterError("convergence_rates: h and error lists differ in length");
  if (h.size() < 2) throw ParameterError("convergence_rates: need at least two levels");
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (!(errors[k] > 0.0) || !std::isfinite(errors[k])) {
      std::ostringstream msg;
      msg << "convergence_rates: error at level " << k << " is " << errors[k];
      throw UndefinedRateError(msg.str());
    }
    if (k > 0 && std::abs(h[k - 1] / h[k] - 2.0) > 1e-9)
      throw ParameterError("convergence_rates: mesh sizes must halve at every step");
  }
  RateSummary out;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k)
    out.per_step.push_back(std::log2(errors[k] / errors[k + 1]));
  out.fitted = fitted_rate(h, errors, h.size());
  return out;
}

double fitted_rate(const std::vector<double>& h, const std::vector<double>& errors,
                   std::size_t count) {
  if (h.size() != errors.size() || h.size() < 2)
    throw ParameterError("fitted_rate: need at least two matching levels");
  const std::size_t n = std::min(count, h.size());
  if (n < 2) throw ParameterError("fitted_rate: need at least two levels");
  const std::size_t first = h.size() - n;
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = first; k < h.size(); ++k) {
    if (!(errors[k] > 0.0) || !std::isfinite(errors[k]))
      throw UndefinedRateError("fitted_rate: zero or non-finite error");
    sx += std::log(h[k]);
    sy += std::log(errors[k]);
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = first; k < h.size(); ++k) {
    const double dx = std::log(h[k]) - mx;
    sxy += dx * (std::log(errors[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace fracfem
