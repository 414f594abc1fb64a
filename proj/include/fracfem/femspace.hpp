#pragma once

#include <functional>
#include <vector>

#include "fracfem/fracpoly.hpp"

namespace fracfem {

/// Uniform partition of [0,1] into m >= 2 cells, nodes x_j = j h.
class Mesh {
 public:
  explicit Mesh(int cells);

  int cells() const { return cells_; }
  double h() const { return 1.0 / cells_; }
  double node(int j) const { return static_cast<double>(j) / cells_; }
  /// Number of interior nodes, i.e. dim U_h = dim V_h.
  int interior() const { return cells_ - 1; }

 private:
  int cells_;
};

/// Nodal hat psi_j (j = 0..m) as a piecewise linear; psi_0 and psi_m are the
/// half-hats at the ends.
PiecewiseLinear nodal_hat(const Mesh& mesh, int j);

/// Trial space U_h: interior hats phi_1..phi_{m-1}, zero at both ends.
class TrialBasis {
 public:
  explicit TrialBasis(Mesh mesh) : mesh_(mesh) {}

  const Mesh& mesh() const { return mesh_; }
  int size() const { return mesh_.interior(); }
  /// i in 1..m-1
  PiecewiseLinear function(int i) const;
  /// phi_i' as Left steps: (1/h)[(x-x_{i-1})^0 - 2(x-x_i)^0 + (x-x_{i+1})^0].
  PowerSum derivative(int i) const;

 private:
  Mesh mesh_;
};

/// mu_i = (x^{1-alpha}, psi_i), i = 0..m-1, in closed form.
double weight_moment(const Mesh& mesh, FracOrder alpha, int i);
std::vector<double> weight_moments(const Mesh& mesh, FracOrder alpha);

/// Caputo test space V_h: eta_i = psi_i - (mu_i/mu_0) psi_0, i = 1..m-1.
/// Each eta_i vanishes at 1 and is orthogonal to x^{1-alpha}.
class CaputoTestBasis {
 public:
  CaputoTestBasis(Mesh mesh, FracOrder alpha);

  const Mesh& mesh() const { return mesh_; }
  double alpha() const { return alpha_; }
  int size() const { return mesh_.interior(); }
  const std::vector<double>& moments() const { return moments_; }
  /// mu_i / mu_0, the weight of the left half-hat in eta_i.
  double ratio(int i) const { return moments_[i] / moments_[0]; }
  /// i in 1..m-1
  PiecewiseLinear function(int i) const;

 private:
  Mesh mesh_;
  double alpha_;
  std::vector<double> moments_;
};

CaputoTestBasis caputo_test_basis(const Mesh& mesh, FracOrder alpha);

enum class Boundary {
  None,           // interpolate every node
  BothEndsZero,   // v_0 = v_m = 0 (U_h)
  RightEndZero,   // v_m = 0
};

/// Nodal interpolant.  Nodes that are forced to zero are not evaluated;
/// every other node must give a finite value (EvaluabilityError otherwise).
PiecewiseLinear interpolate(const std::function<double(double)>& f, const Mesh& mesh,
                            Boundary boundary);

}  // namespace fracfem
