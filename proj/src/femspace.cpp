#include "fracfem/femspace.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "fracfem/errors.hpp"

namespace fracfem {

Mesh::Mesh(int cells) : cells_(cells) {
  if (cells < 2) throw ParameterError("Mesh: need at least two cells");
}

PiecewiseLinear nodal_hat(const Mesh& mesh, int j) {
  if (j < 0 || j > mesh.cells()) throw ParameterError("nodal_hat: index out of range");
  std::vector<double> values(mesh.cells() + 1, 0.0);
  values[j] = 1.0;
  return PiecewiseLinear(mesh.cells(), std::move(values));
}

PiecewiseLinear TrialBasis::function(int i) const {
  if (i < 1 || i >= mesh_.cells()) throw ParameterError("TrialBasis: index out of range");
  return nodal_hat(mesh_, i);
}

PowerSum TrialBasis::derivative(int i) const {
  if (i < 1 || i >= mesh_.cells()) throw ParameterError("TrialBasis: index out of range");
  const double s = 1.0 / mesh_.h();
  return PowerSum({Term{s, mesh_.node(i - 1), 0.0, Side::Left},
                   Term{-2.0 * s, mesh_.node(i), 0.0, Side::Left},
                   Term{s, mesh_.node(i + 1), 0.0, Side::Left}});
}

double weight_moment(const Mesh& mesh, FracOrder alpha_order, int i) {
  const double alpha = FracOrder::pde(alpha_order.value()).value();
  if (i < 0 || i >= mesh.cells()) throw ParameterError("weight_moment: index out of range");
  const double g = 2.0 - alpha;
  const double h = mesh.h();
  if (i == 0) return std::pow(h, g) / (g * (g + 1.0));
  // (1/h) times the second difference of x^{3-alpha}/((2-alpha)(3-alpha)).
  static constexpr std::array<double, 3> kSecond{1.0, -2.0, 1.0};
  return std::pow(h, g) / (g * (g + 1.0)) * power_difference(kSecond, -1.0, g + 1.0, i);
}

std::vector<double> weight_moments(const Mesh& mesh, FracOrder alpha) {
  std::vector<double> mu(mesh.cells());
  for (int i = 0; i < mesh.cells(); ++i) mu[i] = weight_moment(mesh, alpha, i);
  return mu;
}

CaputoTestBasis::CaputoTestBasis(Mesh mesh, FracOrder alpha)
    : mesh_(mesh),
      alpha_(FracOrder::pde(alpha.value()).value()),
      moments_(weight_moments(mesh, alpha)) {}

PiecewiseLinear CaputoTestBasis::function(int i) const {
  if (i < 1 || i >= mesh_.cells()) throw ParameterError("CaputoTestBasis: index out of range");
  std::vector<double> values(mesh_.cells() + 1, 0.0);
  values[i] = 1.0;
  values[0] = -ratio(i);
  return PiecewiseLinear(mesh_.cells(), std::move(values));
}

CaputoTestBasis caputo_test_basis(const Mesh& mesh, FracOrder alpha) {
  return CaputoTestBasis(mesh, alpha);
}

PiecewiseLinear interpolate(const std::function<double(double)>& f, const Mesh& mesh,
                            Boundary boundary) {
  const int m = mesh.cells();
  std::vector<double> values(m + 1, 0.0);
  const int first = boundary == Boundary::BothEndsZero ? 1 : 0;
  const int last = boundary == Boundary::None ? m : m - 1;
  for (int j = first; j <= last; ++j) {
    double v;
    try {
      v = f(mesh.node(j));
    } catch (const SingularityError& e) {
      std::ostringstream msg;
      msg << "interpolate: function singular at node x = " << mesh.node(j) << ": " << e.what();
      throw EvaluabilityError(msg.str());
    }
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "interpolate: non-finite value at node x = " << mesh.node(j);
      throw EvaluabilityError(msg.str());
    }
    values[j] = v;
  }
  return PiecewiseLinear(m, std::move(values));
}

}  // namespace fracfem
