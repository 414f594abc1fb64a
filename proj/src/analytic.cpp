#include "fracfem/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "fracfem/errors.hpp"
#include "fracfem/special.hpp"

namespace fracfem {

namespace {

FracOrder checked(FracOrder alpha) { return FracOrder::pde(alpha.value()); }

// Largest |coefficient| difference between two power sums, relative to the
// largest coefficient involved.
double coefficient_mismatch(const PowerSum& a, const PowerSum& b) {
  double scale = 0.0;
  for (const auto& t : a.terms()) scale = std::max(scale, std::abs(t.coef));
  for (const auto& t : b.terms()) scale = std::max(scale, std::abs(t.coef));
  double worst = 0.0;
  for (const auto& t : (a - b).terms()) worst = std::max(worst, std::abs(t.coef));
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace

PowerSum primal_solution(const PowerSum& f, FracOrder alpha, DerivativeKind kind) {
  const double a = checked(alpha).value();
  const PowerSum integral = left_frac_integral(f, FracOrder::integral(a));
  const double at_one = evaluate(integral, 1.0);
  const double p = kind == DerivativeKind::Caputo ? 1.0 : a - 1.0;
  return PowerSum::left(at_one, p) - integral;
}

double adjoint_singular_weight(const PowerSum& f, FracOrder alpha, DerivativeKind kind) {
  const double a = checked(alpha).value();
  // (I_1^alpha f)(0) = (x^{alpha-1}, f)/Gamma(alpha).
  const double p = kind == DerivativeKind::Caputo ? 1.0 : a - 1.0;
  return inner_product(PowerSum::left(1.0, p), f) / gamma_fn(a);
}

PowerSum adjoint_solution(const PowerSum& f, FracOrder alpha, DerivativeKind kind) {
  const double a = checked(alpha).value();
  const PowerSum integral = right_frac_integral(to_right_side(f), FracOrder::integral(a));
  return PowerSum::right(adjoint_singular_weight(f, alpha, kind), a - 1.0) - integral;
}

const char* to_string(ExampleId id) {
  switch (id) {
    case ExampleId::A: return "a";
    case ExampleId::B: return "b";
    case ExampleId::C: return "c";
  }
  return "?";
}

ExampleId parse_example_id(const std::string& text) {
  if (text == "a" || text == "A") return ExampleId::A;
  if (text == "b" || text == "B") return ExampleId::B;
  if (text == "c" || text == "C") return ExampleId::C;
  throw ParameterError("unknown example '" + text + "' (expected a, b or c)");
}

ExampleCase example_case(ExampleId id) {
  switch (id) {
    case ExampleId::A:
      return {id, PowerSum::left(1.0, 1.0) - PowerSum::left(1.0, 2.0),
              "f = x(1-x): smooth, vanishes at both ends"};
    case ExampleId::B:
      return {id, PowerSum::constant(1.0), "f = 1: smooth but nonzero at both ends"};
    case ExampleId::C:
      return {id, PowerSum::left(1.0, -0.25), "f = x^{-1/4}: singular at the origin"};
  }
  throw ParameterError("unknown example");
}

ExampleSolution example_suite(ExampleId id, FracOrder alpha, DerivativeKind kind) {
  const double a = checked(alpha).value();
  const bool caputo = kind == DerivativeKind::Caputo;
  // The regular part that multiplies the boundary constant.
  const PowerSum base = PowerSum::left(1.0, caputo ? 1.0 : a - 1.0);
  auto x = [](double p) { return PowerSum::left(1.0, p); };

  ExampleSolution out{example_case(id).source, {}};
  switch (id) {
    case ExampleId::A:
      out.exact = (1.0 / gamma_fn(a + 2.0)) * (base - x(a + 1.0)) -
                  (2.0 / gamma_fn(a + 3.0)) * (base - x(a + 2.0));
      break;
    case ExampleId::B:
      out.exact = (1.0 / gamma_fn(a + 1.0)) * (base - x(a));
      break;
    case ExampleId::C:
      out.exact = (gamma_fn(0.75) / gamma_fn(a + 0.75)) * (base - x(a - 0.25));
      break;
  }
  const double mismatch = coefficient_mismatch(out.exact, primal_solution(out.source, alpha, kind));
  if (mismatch > 1e-12)
    throw std::logic_error("example " + std::string(to_string(id)) +
                           ": closed form disagrees with the solution representation");
  return out;
}

}  // namespace fracfem
