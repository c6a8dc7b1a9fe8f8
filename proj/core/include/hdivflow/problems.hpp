#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "hdivflow/types.hpp"

namespace hdivflow {

/// Coefficients and (optionally) the exact solution of
///   div(u (x) beta) + sigma u + grad p = f,  div u = 0,  u.n = 0
/// on the unit square.
struct ProblemSpec {
  std::string label;
  VectorField beta;
  ScalarField sigma;
  double sigma_min = 0.0;  ///< lower bound sigma_0 > 0
  VectorField source;
  std::optional<VectorField> exact_u;
  std::optional<ScalarField> exact_p;  ///< mean zero over the square
  std::optional<int> vortex_index;
  /// The data is 1-periodic in x and must be solved on an x-periodic mesh.
  bool periodic_x = false;
};

/// Stationary vortex: stream function sin(n pi x) sin(n pi y),
/// beta = (d_y phi, -d_x phi), f = sigma beta, u = beta and
/// p = n^2 pi^2 (cos^2(n pi x) - sin^2(n pi y)) / 2.
ProblemSpec vortex_problem(int n, double sigma);

enum class ShearProfile { constant, linear, sine };

ShearProfile parse_shear_profile(std::string_view name);
std::string_view to_string(ShearProfile profile);

/// x-independent shear flow beta = (g(y), 0) with f = sigma beta, u = beta,
/// p = 0. Periodic in x.
ProblemSpec shear_problem(std::function<double(double)> profile, double sigma,
                          std::string label = "shear");
ProblemSpec shear_problem(ShearProfile profile, double sigma);

/// No advection (beta = 0): sigma u + grad p = sigma w with w the n-vortex
/// field, so u = w and p = 0.
ProblemSpec reaction_problem(int n, double sigma);

/// Mean of a scalar field over the unit square by tensor Gauss quadrature.
double unit_square_mean(const ScalarField& field);

}  // namespace hdivflow
