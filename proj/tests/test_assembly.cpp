#include <doctest.h>

#include <cmath>
#include <random>

#include "fracfem/analytic.hpp"
#include "fracfem/assembly.hpp"
#include "fracfem/errors.hpp"
#include "fracfem/metrics.hpp"
#include "entry_oracle.hpp"

using namespace fracfem;

namespace {

constexpr double kAlphas[] = {4.0 / 3, 1.5, 7.0 / 4};

Formulation rl(double a, Potential q = Potential::zero()) {
  return Formulation(DerivativeKind::RiemannLiouville, FracOrder::pde(a), std::move(q));
}
Formulation caputo(double a, Potential q = Potential::zero()) {
  return Formulation(DerivativeKind::Caputo, FracOrder::pde(a), std::move(q));
}

}  // namespace

TEST_CASE("stiffness is Toeplitz for Riemann-Liouville") {
  for (double a : kAlphas) {
    const auto K = assemble_stiffness(Mesh(16), rl(a));
    for (int i = 0; i + 1 < K.rows(); ++i)
      for (int j = 0; j + 1 < K.cols(); ++j) CHECK(K(i, j) == K(i + 1, j + 1));
    // Entirely lower Hessenberg: the slope of phi_j does not reach back.
    for (int i = 0; i < K.rows(); ++i)
      for (int j = i + 2; j < K.cols(); ++j) CHECK(K(i, j) == 0.0);
  }
}

TEST_CASE("single entry on two cells") {
  const auto K = assemble_stiffness(Mesh(2), rl(1.5));
  REQUIRE(K.rows() == 1);
  CHECK(oracle::rel_diff(K(0, 0), oracle::hat_form(2, 1.5, 1, 1)) < 1e-10);
}

TEST_CASE("stiffness entries against nested quadrature") {
  std::mt19937_64 rng(31);
  for (double a : kAlphas) {
    for (bool cap : {false, true}) {
      for (int m : {2, 3, 5, 8, 16, 32}) {
        CAPTURE(a);
        CAPTURE(cap);
        CAPTURE(m);
        const auto K = assemble_stiffness(Mesh(m), cap ? caputo(a) : rl(a));
        const int n = m - 1;
        std::vector<std::pair<int, int>> spots;
        if (m <= 8) {
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) spots.emplace_back(i, j);
        } else {
          std::uniform_int_distribution<int> pick(0, n - 1);
          for (int s = 0; s < 12; ++s) spots.emplace_back(pick(rng), pick(rng));
          spots.emplace_back(n - 1, 0);
          spots.emplace_back(0, 0);
          spots.emplace_back(n - 1, n - 1);
        }
        for (auto [i, j] : spots) {
          const double ref = oracle::stiffness(m, a, cap, i, j);
          if (ref == 0.0)
            CHECK(K(i, j) == 0.0);
          else
            CHECK(oracle::rel_diff(K(i, j), ref) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("stiffness agrees with the generic bilinear form") {
  const Mesh mesh(6);
  const TrialBasis trial(mesh);
  for (double a : kAlphas) {
    const auto K = assemble_stiffness(mesh, caputo(a));
    const auto test = caputo_test_basis(mesh, FracOrder::pde(a));
    for (int i = 1; i < 6; ++i)
      for (int j = 1; j < 6; ++j) {
        const double v = bilinear_form(trial.function(j).to_power_sum(),
                                       test.function(i).to_power_sum(), FracOrder::pde(a));
        CHECK(std::abs(K(i - 1, j - 1) - v) < 1e-11 * std::abs(K(0, 0)));
      }
  }
}

TEST_CASE("Riemann-Liouville stiffness is positive definite on samples") {
  std::mt19937_64 rng(32);
  std::normal_distribution<double> g;
  for (double a : kAlphas) {
    for (int m : {5, 40, 160}) {
      const Eigen::MatrixXd K = assemble_stiffness(Mesh(m), rl(a));
      for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd c(m - 1);
        for (auto& v : c) v = g(rng);
        CHECK(c.dot(K * c) > 0.0);
      }
      // And in fact: the symmetric part has a positive smallest eigenvalue.
      const Eigen::MatrixXd S = 0.5 * (K + K.transpose());
      CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S).eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("load vectors") {
  SUBCASE("constant source, Riemann-Liouville") {
    const auto F = assemble_load(Mesh(10), rl(1.5), PowerSum::constant(1.0));
    for (int i = 0; i < F.size(); ++i) CHECK(F(i) == doctest::Approx(0.1).epsilon(1e-14));
  }
  SUBCASE("constant source, Caputo on two cells") {
    const auto F = assemble_load(Mesh(2), caputo(1.5), PowerSum::constant(1.0));
    const auto basis = caputo_test_basis(Mesh(2), FracOrder::pde(1.5));
    REQUIRE(F.size() == 1);
    CHECK(F(0) == doctest::Approx(0.5 - basis.ratio(1) * 0.25).epsilon(1e-14));
  }
  SUBCASE("singular and off-node sources against quadrature") {
    const PowerSum sources[] = {PowerSum::left(1.0, -0.25),
                                PowerSum::left(1.0, 1.0) - PowerSum::left(1.0, 2.0),
                                PowerSum::left(2.0, 0.5, 0.37) + PowerSum::right(1.0, 0.3)};
    for (const auto& f : sources)
      for (double a : kAlphas)
        for (bool cap : {false, true})
          for (int m : {2, 7, 32}) {
            const auto F = assemble_load(Mesh(m), cap ? caputo(a) : rl(a), f);
            for (int i = 0; i < m - 1; ++i) {
              std::vector<double> kinks;
              for (const auto& t : f.terms())
                if (t.anchor > 0.0 && t.anchor < 1.0) kinks.push_back(t.anchor);
              const double ref = oracle::load(m, a, cap, f, i, kinks);
              CHECK(std::abs(F(i) - ref) <= 1e-11 * std::max(std::abs(ref), 1.0 / m));
            }
          }
  }
}

TEST_CASE("potential matrices") {
  SUBCASE("zero potential") {
    CHECK(assemble_potential(Mesh(5), rl(1.5)).isZero(0.0));
  }
  SUBCASE("unit potential is the hat mass matrix") {
    const int m = 9;
    const double h = 1.0 / m;
    const auto P = assemble_potential(Mesh(m), rl(1.5, Potential::constant(1.0)));
    for (int i = 0; i < m - 1; ++i)
      for (int j = 0; j < m - 1; ++j) {
        const double expected = i == j ? 2 * h / 3 : (std::abs(i - j) == 1 ? h / 6 : 0.0);
        CHECK(std::abs(P(i, j) - expected) < 1e-15);
      }
  }
  SUBCASE("q = x against composite Gauss-Legendre") {
    const int m = 8;
    const Potential q([](double x) { return x; });
    for (bool cap : {false, true}) {
      const auto P = assemble_potential(Mesh(m), cap ? caputo(1.5, q) : rl(1.5, q));
      const auto basis = caputo_test_basis(Mesh(m), FracOrder::pde(1.5));
      for (int i = 1; i < m; ++i)
        for (int j = 1; j < m; ++j) {
          auto test = [&](double x) {
            return oracle::hat(m, i, x) - (cap ? basis.ratio(i) * oracle::hat(m, 0, x) : 0.0);
          };
          const double ref = oracle::composite_gauss(
              [&](double x) { return x * oracle::hat(m, j, x) * test(x); }, 0.0, 1.0, m);
          CHECK(std::abs(P(i - 1, j - 1) - ref) < 1e-12);
        }
    }
  }
}

TEST_CASE("dense solve") {
  SUBCASE("identity") {
    LinearSystem s{Eigen::MatrixXd::Identity(4, 4), Eigen::VectorXd::Unit(4, 0), std::nullopt};
    CHECK(solve(s).isApprox(Eigen::VectorXd::Unit(4, 0)));
    CHECK(s.solution.has_value());
  }
  SUBCASE("duplicate rows") {
    Eigen::MatrixXd A(2, 2);
    A << 1.0, 2.0, 1.0, 2.0;
    LinearSystem s{A, Eigen::VectorXd::Ones(2), std::nullopt};
    CHECK_THROWS_AS(solve(s), SingularSystemError);
  }
  SUBCASE("shape mismatch") {
    LinearSystem s{Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Ones(2), std::nullopt};
    CHECK_THROWS_AS(solve(s), ParameterError);
  }
}

TEST_CASE("constant source solution tracks the exact one at the nodes") {
  const double a = 1.5;
  const Mesh mesh(20);
  const PowerSum f = PowerSum::constant(1.0);
  const auto uh = solve_problem(mesh, rl(a), f);
  const auto u = primal_solution(f, FracOrder::pde(a), DerivativeKind::RiemannLiouville);
  const auto rec = measure(u, uh, FracOrder::pde(a), DerivativeKind::RiemannLiouville);
  double worst = 0.0;
  for (int j = 0; j <= 20; ++j) worst = std::max(worst, std::abs(uh.values()[j] - u(mesh.node(j))));
  CHECK(worst > 0.0);
  CHECK(worst <= rec.halpha_error);
}

TEST_CASE("discrete solutions are orthogonal to (1-x)^(a-1)") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  for (double a : kAlphas) {
    const auto phi0 = PowerSum::right(1.0, a - 1);
    for (int trial = 0; trial < 10; ++trial) {
      const int m = 10;
      std::vector<double> values(m + 1, 0.0);
      for (int j = 1; j < m; ++j) values[j] = v(rng);
      const auto u = PiecewiseLinear(m, values).to_power_sum();
      CHECK(std::abs(bilinear_form(u, phi0, FracOrder::pde(a))) < 1e-10);
    }
  }
}

TEST_CASE("form of x against functions vanishing at 1") {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  for (double a : kAlphas) {
    for (int trial = 0; trial < 10; ++trial) {
      const int m = 9;
      std::vector<double> values(m + 1, 0.0);
      for (int j = 0; j < m; ++j) values[j] = v(rng);
      const auto w = PiecewiseLinear(m, values).to_power_sum();
      const double lhs = bilinear_form(PowerSum::left(1.0, 1.0), w, FracOrder::pde(a));
      const double rhs = -inner_product(PowerSum::left(1.0, 1 - a), w) / std::tgamma(2 - a);
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }
}

TEST_CASE("every mesh of the study ladder solves") {
  for (double a : kAlphas)
    for (bool cap : {false, true})
      for (int k = 1; k <= 7; ++k) {
        const int m = 10 << k;
        LinearSystem s = assemble_system(Mesh(m), cap ? caputo(a) : rl(a), PowerSum::constant(1.0));
        CHECK_NOTHROW(solve(s));
      }
}
