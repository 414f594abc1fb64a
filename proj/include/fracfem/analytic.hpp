#pragma once

#include <string>

#include "fracfem/assembly.hpp"
#include "fracfem/fracpoly.hpp"

namespace fracfem {

/// Exact solution of -D^alpha u = f, u(0) = u(1) = 0:
///   Riemann-Liouville  u = -I^alpha f + (I^alpha f)(1) x^{alpha-1}
///   Caputo             u = -I^alpha f + (I^alpha f)(1) x
/// f must be Left-sided.
PowerSum primal_solution(const PowerSum& f, FracOrder alpha, DerivativeKind kind);

/// Exact solution of the adjoint problem:
///   Riemann-Liouville  w = -I_1^alpha f + (I_1^alpha f)(0) (1-x)^{alpha-1}
///   Caputo             w = c_f (1-x)^{alpha-1} - I_1^alpha f,  c_f = (x, f)/Gamma(alpha)
/// Left-sided polynomial terms are re-expanded about 1 first; any other
/// Left term has no truncated-power image and raises SidednessError.
PowerSum adjoint_solution(const PowerSum& f, FracOrder alpha, DerivativeKind kind);

/// Weight of (1-x)^{alpha-1} in the adjoint solution.  Defined for every
/// integrable f, including those adjoint_solution rejects.
double adjoint_singular_weight(const PowerSum& f, FracOrder alpha, DerivativeKind kind);

enum class ExampleId { A, B, C };

const char* to_string(ExampleId id);
ExampleId parse_example_id(const std::string& text);

struct ExampleCase {
  ExampleId id;
  PowerSum source;
  std::string regularity_note;
};

ExampleCase example_case(ExampleId id);

struct ExampleSolution {
  PowerSum source;
  PowerSum exact;
};

/// Source and hand-written exact solution of one of the three model
/// problems.  The hand-written formula is checked against primal_solution
/// and a mismatch above 1e-12 raises std::logic_error.
ExampleSolution example_suite(ExampleId id, FracOrder alpha, DerivativeKind kind);

}  // namespace fracfem
