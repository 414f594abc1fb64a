#include "fracfem/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "fracfem/errors.hpp"
#include "fracfem/special.hpp"

namespace fracfem {

double jacobi_weight_mass(double a, double b) {
  return std::pow(2.0, a + b + 1.0) * beta_fn(a + 1.0, b + 1.0);
}

QuadRule gauss_jacobi_rule(int n, double a, double b) {
  if (n < 1) throw ParameterError("gauss_jacobi_rule: n must be positive");
  if (!(a > -1.0) || !(b > -1.0))
    throw ParameterError("gauss_jacobi_rule: exponents must exceed -1");

  // Three-term recurrence of the monic Jacobi polynomials: diag(k) = a_k and
  // offdiag(k-1) = sqrt(b_k), one entry longer than the Jacobi matrix needs
  // so that p_n can be evaluated for the Newton polish below.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd offdiag(n);
  const double ab = a + b;
  diag(0) = (b - a) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k <= n; ++k) {
    const double s = 2.0 * k + ab;
    double beta;
    if (k == 1) {
      // (a+b+1) cancels analytically; keeps a+b = -1 well defined.
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
    } else {
      beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    offdiag(k - 1) = std::sqrt(beta);
  }

  QuadRule rule;
  rule.a = a;
  rule.b = b;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mass = jacobi_weight_mass(a, b);
  if (n == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = mass;
    return rule;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, offdiag.head(n - 1), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("gauss_jacobi_rule: eigen-solver failed", 0.0, 0.0);

  // Eigenvalues are accurate to a few ulps in absolute terms only, and the
  // eigenvector weights lose up to 1e-12 near the ends.  Polish each node by
  // Newton on the orthonormal recurrence and take the weight as the
  // Christoffel number 1 / sum_k p_k(x)^2, a sum of positive terms.
  const double p0 = 1.0 / std::sqrt(mass);
  struct Eval {
    double pn, dpn, christoffel;
  };
  auto eval = [&](double x) {
    double prev = 0.0, cur = p0, dprev = 0.0, dcur = 0.0, sum = p0 * p0;
    for (int k = 0; k < n; ++k) {
      const double back = k == 0 ? 0.0 : offdiag(k - 1);
      const double next = ((x - diag(k)) * cur - back * prev) / offdiag(k);
      const double dnext = (cur + (x - diag(k)) * dcur - back * dprev) / offdiag(k);
      prev = cur;
      cur = next;
      dprev = dcur;
      dcur = dnext;
      if (k + 1 < n) sum += cur * cur;
    }
    return Eval{cur, dcur, sum};
  };
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      const Eval e = eval(x);
      const double step = e.pn / e.dpn;
      if (!std::isfinite(step) || std::abs(step) > 1e-6) break;
      x -= step;
      if (std::abs(step) <= 1e-17) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / eval(x).christoffel;
  }
  return rule;
}

std::shared_ptr<const QuadRule> cached_jacobi_rule(int n, double a, double b) {
  using Key = std::tuple<int, double, double>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const QuadRule>> cache;
  const Key key{n, a, b};
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const QuadRule>(gauss_jacobi_rule(n, a, b));
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(rule)).first->second;
}

namespace {

struct PanelEstimate {
  double value;
  double magnitude;  // integral of |f|, same rule
};

// Mapped Gauss-Jacobi estimate of the integral of f over [lo, hi] where f
// carries (x-lo)^le (hi-x)^re.
PanelEstimate panel(const Integrand& f, double lo, double hi, double le, double re, int n) {
  const auto rule = cached_jacobi_rule(n, re, le);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  double mag = 0.0;
  for (int i = 0; i < rule->size(); ++i) {
    const double t = rule->nodes[i];
    const double x = lo + half * (1.0 + t);
    double factor = 1.0;
    if (le != 0.0) factor *= std::pow(1.0 + t, le);
    if (re != 0.0) factor *= std::pow(1.0 - t, re);
    const double g = f(x) / factor;
    sum += rule->weights[i] * g;
    mag += rule->weights[i] * std::abs(g);
  }
  return {half * sum, half * mag};
}

double refine(const Integrand& f, double lo, double hi, double le, double re, double abs_tol,
              int depth, const PanelEstimate& coarse, const PanelEstimate& fine) {
  if (std::abs(fine.value - coarse.value) <= abs_tol) return fine.value;
  if (depth >= kMaxRefinementDepth) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "integrate_singular: no convergence on [" << lo << ", " << hi << "] after "
        << kMaxRefinementDepth << " bisections (estimates " << coarse.value << ", "
        << fine.value << ")";
    throw ConvergenceError(msg.str(), coarse.value, fine.value);
  }
  const double mid = 0.5 * (lo + hi);
  const auto lc = panel(f, lo, mid, le, 0.0, 16);
  const auto lf = panel(f, lo, mid, le, 0.0, 32);
  const auto rc = panel(f, mid, hi, 0.0, re, 16);
  const auto rf = panel(f, mid, hi, 0.0, re, 32);
  return refine(f, lo, mid, le, 0.0, 0.5 * abs_tol, depth + 1, lc, lf) +
         refine(f, mid, hi, 0.0, re, 0.5 * abs_tol, depth + 1, rc, rf);
}

}  // namespace

double integrate_singular(const Integrand& f, double lo, double hi, double left_exp,
                          double right_exp, double tol, double abs_floor) {
  if (!(left_exp > -1.0) || !(right_exp > -1.0))
    throw ParameterError("integrate_singular: endpoint exponents must exceed -1");
  if (!(tol > 0.0)) throw ParameterError("integrate_singular: tol must be positive");
  if (hi == lo) return 0.0;
  if (hi < lo) return -integrate_singular(f, hi, lo, right_exp, left_exp, tol, abs_floor);

  const auto coarse = panel(f, lo, hi, left_exp, right_exp, 16);
  const auto fine = panel(f, lo, hi, left_exp, right_exp, 32);
  // Tolerance relative to the L1 size keeps integrands with vanishing
  // integral (orthogonality checks) from looping forever.
  const double abs_tol = std::max(tol * std::max(fine.magnitude, 1e-300), abs_floor);
  return refine(f, lo, hi, left_exp, right_exp, abs_tol, 0, coarse, fine);
}

double integrate_graded(const Integrand& f, double lo, double hi, double min_exponent,
                        double tol, double abs_floor) {
  if (!(min_exponent > -1.0))
    throw ParameterError("integrate_graded: min_exponent must exceed -1");
  if (hi == lo) return 0.0;
  const double len = hi - lo;
  // Smallest term becomes s^(k(p+1)-1) with k(p+1) >= 12.
  const double k = std::clamp(std::ceil(12.0 / (min_exponent + 1.0)), 1.0, 40.0);
  auto mapped = [&](double s) {
    const double sk1 = std::pow(s, k - 1.0);
    const double x = lo + len * sk1 * s;
    if (x == lo) return 0.0;
    return f(x) * len * k * sk1;
  };
  return integrate_singular(mapped, 0.0, 1.0, 0.0, 0.0, tol, abs_floor);
}

}  // namespace fracfem
