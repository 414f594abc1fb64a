#include "fracfem/fracpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "fracfem/errors.hpp"
#include "fracfem/special.hpp"

namespace fracfem {

FracOrder::FracOrder(double value, Range range) : value_(value), range_(range) {
  bool ok = std::isfinite(value);
  switch (range) {
    case Range::Unit:
      ok = ok && value > 0.0 && value < 1.0;
      break;
    case Range::Pde:
      ok = ok && value > 1.0 && value < 2.0;
      break;
    case Range::UpToTwo:
      ok = ok && value > 0.0 && value < 2.0 && value != 1.0;
      break;
    case Range::NonNegative:
      ok = ok && value >= 0.0;
      break;
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "fractional order " << value << " outside its admissible range";
    throw ParameterError(msg.str());
  }
}

// ---------------------------------------------------------------------------
// PowerSum

namespace {

bool is_base_anchor(const Term& t) {
  return (t.side == Side::Left && t.anchor == 0.0) || (t.side == Side::Right && t.anchor == 1.0);
}

// Support of the term inside [0,1] is empty (or a single point).
bool vanishes_on_unit_interval(const Term& t) {
  return (t.side == Side::Left && t.anchor >= 1.0) || (t.side == Side::Right && t.anchor <= 0.0);
}

void validate(const Term& t) {
  if (!std::isfinite(t.coef)) throw ParameterError("PowerSum: non-finite coefficient");
  if (!(t.anchor >= 0.0 && t.anchor <= 1.0))
    throw ParameterError("PowerSum: anchor outside [0,1]");
  if (!std::isfinite(t.exponent) || !(t.exponent > -1.0))
    throw ParameterError("PowerSum: exponent must exceed -1 (local integrability)");
}

}  // namespace

PowerSum::PowerSum(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) validate(t);
  canonicalize();
}

PowerSum PowerSum::left(double coef, double exponent, double anchor) {
  return PowerSum({Term{coef, anchor, exponent, Side::Left}});
}

PowerSum PowerSum::right(double coef, double exponent, double anchor) {
  return PowerSum({Term{coef, anchor, exponent, Side::Right}});
}

void PowerSum::canonicalize() {
  std::erase_if(terms_, vanishes_on_unit_interval);
  std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) {
    return std::tie(x.anchor, x.exponent, x.side) < std::tie(y.anchor, y.exponent, y.side);
  });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    bool absorbed = false;
    for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
      if (it->anchor != t.anchor || t.exponent - it->exponent > kExponentMergeTol) break;
      if (it->side == t.side) {
        it->coef += t.coef;
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.push_back(t);
  }
  std::erase_if(merged, [](const Term& t) { return std::abs(t.coef) < kZeroCoef; });
  terms_ = std::move(merged);
}

double PowerSum::operator()(double x) const { return evaluate(*this, x); }

double PowerSum::min_exponent_at(double point) const {
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& t : terms_)
    if (t.anchor == point) lowest = std::min(lowest, t.exponent);
  return std::isfinite(lowest) ? lowest : 0.0;
}

PowerSum PowerSum::operator-() const {
  PowerSum r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

PowerSum& PowerSum::operator+=(const PowerSum& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

PowerSum& PowerSum::operator-=(const PowerSum& other) { return *this += -other; }

PowerSum& PowerSum::operator*=(double s) {
  for (auto& t : terms_) t.coef *= s;
  canonicalize();
  return *this;
}

std::string PowerSum::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  out.precision(12);
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) out << " + ";
    first = false;
    out << t.coef << "*";
    if (t.side == Side::Left)
      out << "(x-" << t.anchor << ")";
    else
      out << "(" << t.anchor << "-x)";
    out << "^" << t.exponent;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// PiecewiseLinear

PiecewiseLinear::PiecewiseLinear(int cells, std::vector<double> values)
    : cells_(cells), values_(std::move(values)) {
  if (cells < 1) throw ParameterError("PiecewiseLinear: need at least one cell");
  if (values_.size() != static_cast<std::size_t>(cells) + 1)
    throw ParameterError("PiecewiseLinear: expected cells+1 nodal values");
}

double PiecewiseLinear::operator()(double x) const {
  const double xc = std::clamp(x, 0.0, 1.0);
  const int j = std::min(static_cast<int>(xc * cells_), cells_ - 1);
  const double t = xc * cells_ - j;
  return (1.0 - t) * values_[j] + t * values_[j + 1];
}

PowerSum PiecewiseLinear::to_power_sum() const {
  std::vector<Term> terms;
  terms.reserve(values_.size());
  terms.push_back({values_[0], 0.0, 0.0, Side::Left});
  double previous = 0.0;
  for (int k = 0; k < cells_; ++k) {
    const double s = slope(k);
    terms.push_back({s - previous, node(k), 1.0, Side::Left});
    previous = s;
  }
  return PowerSum(std::move(terms));
}

PowerSum PiecewiseLinear::derivative() const {
  std::vector<Term> terms;
  terms.reserve(cells_);
  double previous = 0.0;
  for (int k = 0; k < cells_; ++k) {
    const double s = slope(k);
    terms.push_back({s - previous, node(k), 0.0, Side::Left});
    previous = s;
  }
  return PowerSum(std::move(terms));
}

// ---------------------------------------------------------------------------
// Fractional operators

namespace {

PowerSum one_sided_integral(const PowerSum& f, double gamma, Side side, const char* name) {
  if (gamma == 0.0) {
    for (const auto& t : f.terms())
      if (t.side != side) throw SidednessError(std::string(name) + ": term on the wrong side");
    return f;
  }
  std::vector<Term> out;
  out.reserve(f.size());
  for (const auto& t : f.terms()) {
    if (t.side != side) throw SidednessError(std::string(name) + ": term on the wrong side");
    const double p = t.exponent;
    out.push_back(
        {t.coef * gamma_fn(p + 1.0) / gamma_fn(p + gamma + 1.0), t.anchor, p + gamma, side});
  }
  return PowerSum(std::move(out));
}

}  // namespace

PowerSum left_frac_integral(const PowerSum& f, FracOrder gamma) {
  if (gamma.range() != FracOrder::Range::NonNegative)
    gamma = FracOrder::integral(gamma.value());
  return one_sided_integral(f, gamma.value(), Side::Left, "left_frac_integral");
}

PowerSum right_frac_integral(const PowerSum& f, FracOrder gamma) {
  if (gamma.range() != FracOrder::Range::NonNegative)
    gamma = FracOrder::integral(gamma.value());
  return one_sided_integral(f, gamma.value(), Side::Right, "right_frac_integral");
}

PowerSum riemann_derivative(const PowerSum& f, FracOrder beta_order, Side side) {
  const double beta = FracOrder::derivative(beta_order.value()).value();
  std::vector<Term> out;
  out.reserve(f.size());
  for (const auto& t : f.terms()) {
    if (t.side != side) throw SidednessError("riemann_derivative: term on the wrong side");
    const double p = t.exponent;
    const double q = p - beta;
    const double rg = reciprocal_gamma(q + 1.0);
    if (rg == 0.0) continue;  // lower integer power annihilated
    if (!(q > -1.0)) {
      std::ostringstream msg;
      msg << "riemann_derivative: image exponent " << q << " is not locally integrable";
      throw RepresentabilityError(msg.str());
    }
    out.push_back({t.coef * gamma_fn(p + 1.0) * rg, t.anchor, q, side});
  }
  return PowerSum(std::move(out));
}

PowerSum caputo_derivative(const PowerSum& f, FracOrder beta_order, Side side) {
  const double beta = FracOrder::derivative(beta_order.value()).value();
  const int n = beta < 1.0 ? 1 : 2;
  std::vector<Term> rest;
  rest.reserve(f.size());
  for (const auto& t : f.terms()) {
    if (t.side != side) throw SidednessError("caputo_derivative: term on the wrong side");
    if (is_base_anchor(t)) {
      const double p = t.exponent;
      if (is_nonnegative_integer(p) && p < n) continue;  // Taylor part, annihilated
      if (p < n - 1) {
        std::ostringstream msg;
        msg << "caputo_derivative: derivative of order " << n - 1
            << " does not exist at the base point for exponent " << p;
        throw EvaluabilityError(msg.str());
      }
    }
    rest.push_back(t);
  }
  // What is left has vanishing Taylor data at the base point, where the two
  // derivatives agree.
  return riemann_derivative(PowerSum(std::move(rest)), FracOrder::derivative(beta), side);
}

PowerSum derivative(const PowerSum& f) {
  std::vector<Term> out;
  out.reserve(f.size());
  for (const auto& t : f.terms()) {
    const double p = t.exponent;
    if (p == 0.0) {
      if (is_base_anchor(t)) continue;
      throw RepresentabilityError("derivative: interior jump has a Dirac derivative");
    }
    if (!(p - 1.0 > -1.0))
      throw RepresentabilityError("derivative: image exponent is not locally integrable");
    const double sign = t.side == Side::Left ? 1.0 : -1.0;
    out.push_back({sign * p * t.coef, t.anchor, p - 1.0, t.side});
  }
  return PowerSum(std::move(out));
}

double evaluate(const PowerSum& f, double x) {
  double sum = 0.0;
  for (const auto& t : f.terms()) {
    const double r = t.side == Side::Left ? x - t.anchor : t.anchor - x;
    if (r > 0.0) {
      sum += t.coef * std::pow(r, t.exponent);
    } else if (r == 0.0) {
      if (t.exponent < 0.0) {
        std::ostringstream msg;
        msg << "evaluate: x = " << x << " is the anchor of a negative power";
        throw SingularityError(msg.str());
      }
      if (t.exponent == 0.0) sum += t.coef;
    }
  }
  return sum;
}

PowerSum to_right_side(const PowerSum& f) {
  std::vector<Term> out;
  for (const auto& t : f.terms()) {
    if (t.side == Side::Right) {
      out.push_back(t);
      continue;
    }
    if (t.anchor != 0.0 || !is_nonnegative_integer(t.exponent))
      throw SidednessError("to_right_side: only polynomial Left terms can be re-anchored at 1");
    // x^k = (1 - (1-x))^k
    const int k = static_cast<int>(t.exponent);
    for (int i = 0; i <= k; ++i) {
      const double c = binomial(k, i) * ((i % 2) ? -1.0 : 1.0);
      out.push_back({t.coef * c, 1.0, static_cast<double>(i), Side::Right});
    }
  }
  return PowerSum(std::move(out));
}

// ---------------------------------------------------------------------------
// Pairings

namespace {

constexpr int kMaxExpandedDegree = 30;

bool small_integer(double p) { return is_nonnegative_integer(p) && p <= kMaxExpandedDegree; }

// Integral over [b, 1] of (x-a)^p (x-b)^q with a < b < 1.
double left_left_offset(double a, double p, double b, double q, double tol) {
  const double d = b - a;
  const double len = 1.0 - b;
  if (small_integer(p)) {
    const int n = static_cast<int>(p);
    double sum = 0.0;
    for (int k = 0; k <= n; ++k)
      sum += binomial(n, k) * std::pow(d, n - k) * std::pow(len, k + q + 1.0) / (k + q + 1.0);
    return sum;
  }
  if (small_integer(q) && d <= 0.5 * (1.0 - a)) {
    const int n = static_cast<int>(q);
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double e = p + k + 1.0;
      sum += binomial(n, k) * std::pow(-d, n - k) * (std::pow(1.0 - a, e) - std::pow(d, e)) / e;
    }
    return sum;
  }
  // Geometric split: the distance to a doubles from piece to piece, so
  // (x-a)^p stays smooth relative to each piece.
  auto integrand = [=](double x) { return std::pow(x - a, p) * std::pow(x - b, q); };
  double sum = 0.0;
  double lo = b;
  double width = d;
  bool first = true;
  while (lo < 1.0) {
    const double hi = std::min(1.0, lo + width);
    sum += integrate_singular(integrand, lo, hi, first ? q : 0.0, 0.0, tol);
    first = false;
    lo = hi;
    width *= 2.0;
  }
  return sum;
}

Term mirrored(Term t) {
  t.anchor = 1.0 - t.anchor;
  t.side = t.side == Side::Left ? Side::Right : Side::Left;
  return t;
}

}  // namespace

double term_pair_integral(const Term& s_in, const Term& t_in, double tol) {
  Term s = s_in;
  Term t = t_in;
  if (s.side == Side::Right && t.side == Side::Right) {
    s = mirrored(s);
    t = mirrored(t);
  } else if (s.side == Side::Right) {
    std::swap(s, t);
  }
  double coef = s.coef * t.coef;
  if (coef == 0.0) return 0.0;

  if (t.side == Side::Right) {
    // (x-a)_+^p (b-x)_+^q lives on [a, b]: a complete Beta integral.
    const double a = s.anchor;
    const double b = t.anchor;
    if (b <= a) return 0.0;
    const double p = s.exponent;
    const double q = t.exponent;
    return coef * std::pow(b - a, p + q + 1.0) * beta_fn(p + 1.0, q + 1.0);
  }

  if (s.anchor > t.anchor) std::swap(s, t);
  const double a = s.anchor;
  const double b = t.anchor;
  const double p = s.exponent;
  const double q = t.exponent;
  if (a == b) {
    if (!(p + q > -1.0)) {
      std::ostringstream msg;
      msg << "inner_product: product of powers " << p << " and " << q << " at " << a
          << " is not integrable";
      throw IntegrabilityError(msg.str());
    }
    return coef * std::pow(1.0 - a, p + q + 1.0) / (p + q + 1.0);
  }
  if (b >= 1.0) return 0.0;
  return coef * left_left_offset(a, p, b, q, tol);
}

double inner_product(const PowerSum& f, const PowerSum& g, double tol) {
  double sum = 0.0;
  for (const auto& s : f.terms())
    for (const auto& t : g.terms()) sum += term_pair_integral(s, t, tol);
  return sum;
}

double inner_product(const PiecewiseLinear& f, const PowerSum& g, double tol) {
  return inner_product(f.to_power_sum(), g, tol);
}

double inner_product(const PowerSum& f, const PiecewiseLinear& g, double tol) {
  return inner_product(f, g.to_power_sum(), tol);
}

double inner_product(const PiecewiseLinear& f, const PiecewiseLinear& g, double tol) {
  return inner_product(f.to_power_sum(), g.to_power_sum(), tol);
}

double power_difference(std::span<const double> w, double offset, double gamma, double d) {
  const int n = static_cast<int>(w.size());
  const double half_span = 0.5 * (n - 1);
  const double center = d + offset + half_span;
  if (center < 8.0 * std::max(half_span, 0.5)) {
    double sum = 0.0;
    for (int r = 0; r < n; ++r) {
      const double x = d + offset + r;
      if (x > 0.0)
        sum += w[r] * std::pow(x, gamma);
      else if (x == 0.0 && gamma == 0.0)
        sum += w[r];
    }
    return sum;
  }
  // (c + delta)^g = c^g sum_k C(g,k) (delta/c)^k, |delta/c| <= 1/8.
  double abs_weight = 0.0;
  for (double wr : w) abs_weight += std::abs(wr);
  double sum = 0.0;
  double binom = 1.0;
  double ratio_power = 1.0;  // (half_span / center)^k
  for (int k = 0; k < 80; ++k) {
    double moment = 0.0;
    for (int r = 0; r < n; ++r) moment += w[r] * std::pow(r - half_span, k);
    sum += binom * moment * std::pow(center, -k);
    binom *= (gamma - k) / (k + 1);
    ratio_power *= half_span / center;
    // Bound on every remaining term.
    if (k > 2 && std::abs(binom) * ratio_power * abs_weight <= 1e-17 * std::abs(sum)) break;
  }
  return std::pow(center, gamma) * sum;
}

}  // namespace fracfem
