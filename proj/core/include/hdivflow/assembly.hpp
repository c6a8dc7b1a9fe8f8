#pragma once

#include <iosfwd>
#include <memory>
#include <string_view>
#include <vector>

#include <Eigen/SparseCore>

#include "hdivflow/fe_space.hpp"
#include "hdivflow/problems.hpp"
#include "hdivflow/quadrature.hpp"

namespace hdivflow {

/// Supported velocity/pressure pairs.
enum class ElementPair { rt0p0, rt1p1dc, bdm1p0 };

ElementPair parse_element_pair(std::string_view name);
std::string_view to_string(ElementPair pair);
SpaceSpec velocity_spec(ElementPair pair);
SpaceSpec pressure_spec(ElementPair pair);

/// Throws InvalidArgument unless the pair is (RT_k, P_k) or (BDM_k, P_{k-1}).
void check_compatible(const SpaceSpec& velocity, const SpaceSpec& pressure);

struct Discretization {
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const FeSpace> velocity;
  std::shared_ptr<const FeSpace> pressure;
};

Discretization make_discretization(std::shared_ptr<const Mesh> mesh, ElementPair pair);

/// Block system over (u, p, lambda):
///
///   [ A   -B^T  0 ] [u]   [F]
///   [ B    0    c ] [p] = [0]
///   [ 0    c^T  0 ] [l]   [0]
///
/// with B_kj = (div phi_j, q_k) and c_k = \int q_k; lambda enforces a
/// mean-zero pressure.
struct SaddleSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  Index n_u = 0;
  Index n_p = 0;
  /// Coefficients of the constant function 1 in the pressure space.
  Eigen::VectorXd pressure_constant;

  Index size() const noexcept { return n_u + n_p + 1; }
  Index multiplier_index() const noexcept { return n_u + n_p; }
};

enum AssemblyTerm : unsigned {
  kConvectionVolume = 1u << 0,  ///< -(u, beta.grad v)_h
  kFacetFlux = 1u << 1,         ///< <(beta.n) u^, v>_h
  kReaction = 1u << 2,          ///< (sigma u, v)
  kPressureCoupling = 1u << 3,  ///< -(p, div v), (div u, q), mean constraint
  kAllTerms = 0xFu,
};

/// Facet treatment on the wall.
enum class WallFlux {
  require_zero,  ///< beta.n must vanish (checked); no contribution
  upwind,        ///< outflow uses the interior trace, inflow a zero exterior
};

struct AssemblyOptions {
  QuadratureConfig quad;
  unsigned terms = kAllTerms;
  bool reverse_cell_order = false;
  double wall_flux_tolerance = 1e-10;
};

/// Throws InvalidArgument for an incompatible pair and ProblemSetupError
/// when |beta.n| exceeds the tolerance at a wall quadrature point.
SaddleSystem assemble(const FeSpace& velocity, const FeSpace& pressure,
                      const ProblemSpec& problem, const AssemblyOptions& options);

/// Upwind facet block of a single edge, as (row, col, value) over global
/// velocity DOFs. Rows are test functions, columns trial functions.
std::vector<Eigen::Triplet<double>> assemble_facet(const FeSpace& velocity,
                                                   const VectorField& beta, Index edge,
                                                   const QuadratureConfig& quad,
                                                   WallFlux wall = WallFlux::upwind,
                                                   double wall_flux_tolerance = 1e-10);

/// Convection operator split into its volume and facet parts; row i, column
/// j is the form with test phi_i and trial phi_j.
struct ConvectionOperator {
  Eigen::SparseMatrix<double> volume;
  Eigen::SparseMatrix<double> facet;
};

ConvectionOperator assemble_convection(const FeSpace& velocity, const VectorField& beta,
                                       const QuadratureConfig& quad,
                                       WallFlux wall = WallFlux::upwind);

/// The two convective terms of the discrete momentum equation for trial u
/// and test v: volume = -(u, beta.grad v)_h, facet = <(beta.n) u^, v>_h.
/// For u = v, volume + facet = -[(v (x) beta, grad v)_h - <beta.n v^, v>_h].
struct FormTerms {
  double volume = 0.0;
  double facet = 0.0;
  double total() const noexcept { return volume + facet; }
};

FormTerms apply_form(const DiscreteField& u, const DiscreteField& v, const VectorField& beta,
                     const QuadratureConfig& quad);

/// Coordinate dump: one `row col value` line per stored entry.
void write_matrix_coordinates(const Eigen::SparseMatrix<double>& matrix, std::ostream& out);

}  // namespace hdivflow
