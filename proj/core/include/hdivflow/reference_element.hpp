#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "hdivflow/types.hpp"

namespace hdivflow {

enum class Family { RT, BDM, P_disc };

/// Finite element family and degree. Supported: RT_0, RT_1, BDM_1, P_0, P_1
/// (discontinuous).
struct SpaceSpec {
  Family family = Family::RT;
  int degree = 0;

  static SpaceSpec rt(int k) { return {Family::RT, k}; }
  static SpaceSpec bdm(int k) { return {Family::BDM, k}; }
  static SpaceSpec p_disc(int k) { return {Family::P_disc, k}; }

  bool is_vector() const noexcept { return family != Family::P_disc; }
  int dofs_per_edge() const noexcept { return is_vector() ? degree + 1 : 0; }
  int dofs_per_cell_interior() const noexcept;
  int dofs_per_cell() const noexcept;

  /// Throws InvalidArgument for unsupported combinations (e.g. BDM_0).
  void validate() const;

  std::string name() const;

  bool operator==(const SpaceSpec&) const = default;
};

/// Point on the reference triangle (0,0), (1,0), (0,1) in barycentric form.
using Barycentric = std::array<double, 3>;

inline Vec2 to_reference(const Barycentric& b) { return {b[1], b[2]}; }

/// Polynomial of total degree <= 2 in the reference coordinates,
/// coefficients over [1, x, y, x^2, xy, y^2].
struct Poly2 {
  std::array<double, 6> c{};

  double value(const Vec2& p) const;
  Vec2 gradient(const Vec2& p) const;
};

/// Shape functions on the reference triangle, dual to the element's degrees
/// of freedom.
///
/// Local DOF order: for each local edge i = 0,1,2 the moments
/// \int_{e_i} v.n L_j(s) ds, j = 0..k, where s runs from local vertex (i+1)%3
/// to (i+2)%3 and L_j is the Legendre polynomial shifted to [0,1]; then, for
/// RT_1, the interior moments \int v_x and \int v_y. Pressure spaces use the
/// constant for P_0 and vertex Lagrange functions for P_1.
class ReferenceBasis {
 public:
  /// Cached per spec; the returned reference lives for the whole program.
  static const ReferenceBasis& get(const SpaceSpec& spec);

  const SpaceSpec& spec() const noexcept { return spec_; }
  int size() const noexcept { return static_cast<int>(vx_.size() + scalar_.size()); }

  Vec2 value(int i, const Vec2& p) const;
  /// Row a, column b holds d v_a / d x_b.
  Mat2 jacobian(int i, const Vec2& p) const;
  double divergence(int i, const Vec2& p) const;

  double scalar_value(int i, const Vec2& p) const;
  Vec2 scalar_gradient(int i, const Vec2& p) const;

  /// Applies every local DOF functional to every basis function. For a dual
  /// basis this is the identity.
  Eigen::MatrixXd functional_matrix() const;

 private:
  explicit ReferenceBasis(const SpaceSpec& spec);

  SpaceSpec spec_;
  std::vector<Poly2> vx_, vy_;  // vector families
  std::vector<Poly2> scalar_;   // P_disc
};

/// Basis values tabulated at a set of reference points; entry (q, i) is at
/// q * n_basis + i.
struct Tabulation {
  int n_basis = 0;
  int n_points = 0;
  std::vector<Vec2> values;       // vector families
  std::vector<Mat2> jacobians;    // vector families
  std::vector<double> divergence; // vector families
  std::vector<double> scalars;    // P_disc
  std::vector<Vec2> gradients;    // P_disc

  std::size_t at(int q, int i) const { return static_cast<std::size_t>(q) * n_basis + i; }
};

Tabulation tabulate(const SpaceSpec& spec, std::span<const Barycentric> points);
Tabulation tabulate(const SpaceSpec& spec, std::span<const Vec2> reference_points);

/// Legendre polynomial P_j(2s-1), the edge moment weight.
double shifted_legendre(int j, double s);

/// Reference triangle vertices and the local edge parametrisation.
const std::array<Vec2, 3>& reference_vertices();
Vec2 reference_edge_point(int local_edge, double s);
/// Outward unit normal of the reference triangle on a local edge.
Vec2 reference_edge_normal(int local_edge);
double reference_edge_length(int local_edge);

}  // namespace hdivflow
