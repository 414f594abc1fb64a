#include <doctest.h>

#include <cmath>

#include "fracfem/analytic.hpp"
#include "fracfem/errors.hpp"
#include "oracle.hpp"

using namespace fracfem;

namespace {

constexpr double kAlphas[] = {4.0 / 3, 1.5, 7.0 / 4};

PowerSum x(double p) { return PowerSum::left(1.0, p); }

void check_equal(const PowerSum& a, const PowerSum& b, double tol) {
  const auto d = a - b;
  double scale = 0.0;
  for (const auto& t : a.terms()) scale = std::max(scale, std::abs(t.coef));
  for (const auto& t : d.terms()) CHECK(std::abs(t.coef) <= tol * scale);
}

}  // namespace

TEST_CASE("primal solution for f = 1, Riemann-Liouville") {
  for (double a : kAlphas) {
    const auto u = primal_solution(PowerSum::constant(1.0), FracOrder::pde(a),
                                   DerivativeKind::RiemannLiouville);
    check_equal(u, (x(a - 1) - x(a)) * (1.0 / std::tgamma(a + 1)), 1e-15);
  }
}

TEST_CASE("primal solution for f = x(1-x), Caputo") {
  for (double a : kAlphas) {
    const auto u = primal_solution(x(1) - x(2), FracOrder::pde(a), DerivativeKind::Caputo);
    const auto expected =
        (x(1) - x(a + 1)) * (1.0 / std::tgamma(a + 2)) - (x(1) - x(a + 2)) * (2.0 / std::tgamma(a + 3));
    check_equal(u, expected, 1e-14);
  }
}

TEST_CASE("primal solution for f = x^(-1/4)") {
  for (double a : kAlphas) {
    const double c = std::tgamma(0.75) / std::tgamma(a + 0.75);
    const auto rl = primal_solution(x(-0.25), FracOrder::pde(a), DerivativeKind::RiemannLiouville);
    check_equal(rl, (x(a - 1) - x(a - 0.25)) * c, 1e-14);
    const auto cap = primal_solution(x(-0.25), FracOrder::pde(a), DerivativeKind::Caputo);
    check_equal(cap, (x(1) - x(a - 0.25)) * c, 1e-14);
  }
}

TEST_CASE("exact solutions solve the equation and vanish at both ends") {
  for (auto id : {ExampleId::A, ExampleId::B, ExampleId::C}) {
    for (double a : kAlphas) {
      const auto alpha = FracOrder::pde(a);
      const auto f = example_case(id).source;
      const auto url = primal_solution(f, alpha, DerivativeKind::RiemannLiouville);
      check_equal(riemann_derivative(url, FracOrder::derivative(a), Side::Left), -f, 1e-12);
      const auto ucap = primal_solution(f, alpha, DerivativeKind::Caputo);
      check_equal(caputo_derivative(ucap, FracOrder::derivative(a), Side::Left), -f, 1e-12);
      for (const auto& u : {url, ucap}) {
        CHECK(evaluate(u, 0.0) == 0.0);
        CHECK(std::abs(evaluate(u, 1.0)) < 1e-15);
      }
    }
  }
}

TEST_CASE("primal solution needs a left-sided source") {
  CHECK_THROWS_AS(primal_solution(PowerSum::right(1.0, 1.0), FracOrder::pde(1.5),
                                  DerivativeKind::Caputo),
                  SidednessError);
}

TEST_CASE("adjoint solutions") {
  for (double a : kAlphas) {
    const auto alpha = FracOrder::pde(a);
    SUBCASE("f = 1") {
      CHECK(adjoint_singular_weight(PowerSum::constant(1.0), alpha, DerivativeKind::Caputo) ==
            doctest::Approx(0.5 / std::tgamma(a)).epsilon(1e-15));
      const auto w =
          adjoint_solution(PowerSum::constant(1.0), alpha, DerivativeKind::RiemannLiouville);
      const auto expected = (PowerSum::right(1.0, a - 1) - PowerSum::right(1.0, a)) *
                            (1.0 / std::tgamma(a + 1));
      for (double s : {0.0, 0.2, 0.6, 0.95}) CHECK(std::abs(w(s) - expected(s)) < 1e-14);
    }
    SUBCASE("adjoint equation, boundary values and constraint") {
      for (const auto& f : {PowerSum::constant(1.0), x(1), x(1) - x(2)}) {
        for (auto kind : {DerivativeKind::RiemannLiouville, DerivativeKind::Caputo}) {
          const auto w = adjoint_solution(f, alpha, kind);
          CHECK(std::abs(w(1.0)) < 1e-15);
          // Both adjoints are right-sided Riemann-Liouville problems.
          const auto dw = riemann_derivative(w, FracOrder::derivative(a), Side::Right);
          check_equal(dw, -to_right_side(f), 1e-12);
          if (kind == DerivativeKind::Caputo) {
            const double r = oracle::integrate(
                [&](double s) { return std::pow(s, 1 - a) * w(s); }, 0.0, 1.0);
            CHECK(std::abs(r) < 1e-10);
          } else {
            CHECK(std::abs(w(0.0)) < 1e-14);
          }
        }
      }
    }
  }
}

TEST_CASE("singular weight of the adjoint for a singular source") {
  // x^{-1/4} has no right-sided image; the weight itself is still defined.
  const double a = 1.5;
  const double c = adjoint_singular_weight(x(-0.25), FracOrder::pde(a), DerivativeKind::Caputo);
  CHECK(c == doctest::Approx(1.0 / (1.75 * std::tgamma(a))).epsilon(1e-14));
  CHECK_THROWS_AS(adjoint_solution(x(-0.25), FracOrder::pde(a), DerivativeKind::Caputo),
                  SidednessError);
}

TEST_CASE("model problems") {
  SUBCASE("a, 7/4, Caputo") {
    const double a = 1.75;
    const auto ex = example_suite(ExampleId::A, FracOrder::pde(a), DerivativeKind::Caputo);
    check_equal(ex.source, x(1) - x(2), 0.0);
    const auto expected = (x(1) - x(2.75)) * (1.0 / std::tgamma(3.75)) -
                          (x(1) - x(3.75)) * (2.0 / std::tgamma(4.75));
    check_equal(ex.exact, expected, 1e-14);
  }
  SUBCASE("b, Riemann-Liouville: derivative blows up at 0") {
    for (double a : kAlphas) {
      const auto ex = example_suite(ExampleId::B, FracOrder::pde(a), DerivativeKind::RiemannLiouville);
      CHECK(std::abs(ex.exact(1.0)) < 1e-15);
      const auto du = derivative(ex.exact);
      CHECK(du.min_exponent_at(0.0) == doctest::Approx(a - 2));
      CHECK(du(1e-8) > du(1e-4));
    }
  }
  SUBCASE("c, 4/3, Riemann-Liouville") {
    const double a = 4.0 / 3;
    const auto ex = example_suite(ExampleId::C, FracOrder::pde(a), DerivativeKind::RiemannLiouville);
    check_equal(ex.exact,
                (x(a - 1) - x(a - 0.25)) * (std::tgamma(0.75) / std::tgamma(a + 0.75)), 1e-14);
  }
  CHECK(!example_case(ExampleId::C).regularity_note.empty());
}

TEST_CASE("example names") {
  CHECK(parse_example_id("a") == ExampleId::A);
  CHECK(parse_example_id("C") == ExampleId::C);
  CHECK(std::string(to_string(ExampleId::B)) == "b");
  CHECK_THROWS_AS(parse_example_id("d"), ParameterError);
}
