#pragma once

#include <span>
#include <string>
#include <vector>

#include "fracfem/quadrature.hpp"

namespace fracfem {

/// A fractional order checked against the interval its use site demands.
class FracOrder {
 public:
  enum class Range {
    Unit,         // (0,1)
    Pde,          // (1,2)
    UpToTwo,      // (0,2), integers excluded
    NonNegative,  // [0, inf)
  };

  FracOrder(double value, Range range);

  static FracOrder pde(double alpha) { return {alpha, Range::Pde}; }
  static FracOrder derivative(double beta) { return {beta, Range::UpToTwo}; }
  static FracOrder integral(double gamma) { return {gamma, Range::NonNegative}; }

  double value() const { return value_; }
  Range range() const { return range_; }

 private:
  double value_;
  Range range_;
};

/// Which endpoint a truncated power grows away from.
///   Left:  (x - anchor)_+^exponent
///   Right: (anchor - x)_+^exponent
enum class Side { Left, Right };

struct Term {
  double coef = 0.0;
  double anchor = 0.0;
  double exponent = 0.0;
  Side side = Side::Left;
};

/// Finite linear combination of one-sided truncated powers on [0,1].
///
/// Always kept canonical: sorted by (anchor, exponent, side), no two terms
/// with the same key, and no (numerically) zero coefficients.  Exponents
/// closer than kExponentMergeTol are treated as equal so that identities such
/// as the semigroup law survive floating-point rounding of the exponents.
class PowerSum {
 public:
  static constexpr double kExponentMergeTol = 1e-12;
  static constexpr double kZeroCoef = 1e-300;

  PowerSum() = default;
  explicit PowerSum(std::vector<Term> terms);

  /// c (x - anchor)_+^p, Left-sided.
  static PowerSum left(double coef, double exponent, double anchor = 0.0);
  /// c (anchor - x)_+^p, Right-sided.
  static PowerSum right(double coef, double exponent, double anchor = 1.0);
  static PowerSum constant(double c) { return left(c, 0.0); }

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Point value; throws SingularityError at the anchor of a negative power.
  double operator()(double x) const;

  /// Smallest exponent among terms anchored at `point` (Left terms for
  /// point 0, Right terms for point 1); 0 if there are none.
  double min_exponent_at(double point) const;

  PowerSum operator-() const;
  PowerSum& operator+=(const PowerSum& other);
  PowerSum& operator-=(const PowerSum& other);
  PowerSum& operator*=(double s);

  friend PowerSum operator+(PowerSum a, const PowerSum& b) { return a += b; }
  friend PowerSum operator-(PowerSum a, const PowerSum& b) { return a -= b; }
  friend PowerSum operator*(PowerSum a, double s) { return a *= s; }
  friend PowerSum operator*(double s, PowerSum a) { return a *= s; }

  std::string to_string() const;

 private:
  void canonicalize();
  std::vector<Term> terms_;
};

/// Continuous piecewise linear function on the uniform mesh with m cells,
/// given by its nodal values v_0..v_m.
class PiecewiseLinear {
 public:
  PiecewiseLinear(int cells, std::vector<double> values);

  int cells() const { return cells_; }
  double h() const { return 1.0 / cells_; }
  double node(int j) const { return static_cast<double>(j) / cells_; }
  const std::vector<double>& values() const { return values_; }
  double slope(int cell) const { return (values_[cell + 1] - values_[cell]) * cells_; }

  double operator()(double x) const;

  /// v_0 + sum_k (s_k - s_{k-1}) (x - x_k)_+ with s_{-1} = 0.
  PowerSum to_power_sum() const;

  /// Piecewise-constant derivative as a sum of Left steps (x - x_k)_+^0.
  PowerSum derivative() const;

 private:
  int cells_;
  std::vector<double> values_;
};

/// Left Riemann-Liouville integral of order gamma >= 0, term by term:
///   c (x-a)^p  ->  c Gamma(p+1)/Gamma(p+gamma+1) (x-a)^(p+gamma).
/// Throws SidednessError on a Right term.
PowerSum left_frac_integral(const PowerSum& f, FracOrder gamma);

/// Mirror image of left_frac_integral for Right terms.
PowerSum right_frac_integral(const PowerSum& f, FracOrder gamma);

/// Riemann-Liouville derivative of order beta in (0,2) on one side.  Powers
/// whose image would carry 1/Gamma(non-positive integer) are annihilated;
/// any other image exponent <= -1 raises RepresentabilityError.
PowerSum riemann_derivative(const PowerSum& f, FracOrder beta, Side side);

/// Caputo derivative of order beta in (0,2): the Riemann-Liouville image
/// minus the Taylor correction at the base point (0 for Left, 1 for Right).
/// Throws EvaluabilityError when f or f' does not exist at that point.
PowerSum caputo_derivative(const PowerSum& f, FracOrder beta, Side side);

/// Classical derivative on (0,1).  Steps anchored at an interior point have
/// a Dirac derivative and raise RepresentabilityError.
PowerSum derivative(const PowerSum& f);

/// Pointwise evaluation.
double evaluate(const PowerSum& f, double x);

/// Rewrites every term as a Right term anchored at 1 when possible
/// (polynomial Left terms anchored at 0); throws SidednessError otherwise.
PowerSum to_right_side(const PowerSum& f);

/// L2(0,1) pairing.  Pairs of terms are integrated in closed form whenever
/// the product is a single power on each piece of its support (same anchor,
/// opposite sides, or one integer exponent); remaining pairs go through
/// integrate_singular on a geometrically graded split of the support.
double inner_product(const PowerSum& f, const PowerSum& g, double tol = kDefaultTol);
double inner_product(const PiecewiseLinear& f, const PowerSum& g, double tol = kDefaultTol);
double inner_product(const PowerSum& f, const PiecewiseLinear& g, double tol = kDefaultTol);
double inner_product(const PiecewiseLinear& f, const PiecewiseLinear& g,
                     double tol = kDefaultTol);

/// Integral over (0,1) of the product of two single terms.
double term_pair_integral(const Term& s, const Term& t, double tol = kDefaultTol);

/// sum_r w[r] (d + offset + r)_+^gamma for r = 0..w.size()-1, evaluated with
/// a binomial series once every argument is large, where the direct sum would
/// lose most digits to cancellation.  The weights must annihilate constants
/// (sum to zero) for the series branch to be used.
double power_difference(std::span<const double> w, double offset, double gamma, double d);

}  // namespace fracfem
