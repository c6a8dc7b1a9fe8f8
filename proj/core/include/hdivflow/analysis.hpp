#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "hdivflow/assembly.hpp"
#include "hdivflow/linear_solver.hpp"
#include "hdivflow/mesh.hpp"

namespace hdivflow {

struct ErrorReport {
  double h = 0.0;  ///< 1/N
  Index n_dofs = 0;
  std::optional<double> vel_l2_rel;   ///< ||u - u_h|| / ||u||
  std::optional<double> pres_l2_rel;  ///< relative, or absolute when p == 0
  bool pres_relative = true;
  std::optional<double> jump_seminorm;    ///< |u - u_h|_beta
  std::optional<double> proj_pres_error;  ///< ||P p - p_h||
  std::optional<double> weighted_vel;     ///< ||sqrt(sigma) (u - u_h)||
  double div_l2 = 0.0;                    ///< ||div u_h||
  double velocity_l2 = 0.0;               ///< ||u_h||
  /// div_l2 / ||u_h|| (div_l2 itself when u_h = 0).
  double div_l2_rel() const noexcept { return velocity_l2 > 0.0 ? div_l2 / velocity_l2 : div_l2; }
};

/// ||v||_Omega and ||v - v_h||_Omega by cell quadrature.
double l2_norm(const Mesh& mesh, const VectorField& v, const QuadratureConfig& quad);
double l2_norm(const Mesh& mesh, const ScalarField& v, const QuadratureConfig& quad);
double l2_error(const DiscreteField& u_h, const VectorField& exact, const QuadratureConfig& quad);
double l2_error(const DiscreteField& p_h, const ScalarField& exact, const QuadratureConfig& quad);
/// ||a - b|| for two scalar fields in the same space.
double l2_distance(const DiscreteField& a, const DiscreteField& b, const QuadratureConfig& quad);
/// ||div u_h||_Omega.
double divergence_l2(const DiscreteField& u_h, const QuadratureConfig& quad);
/// ||div u_h - q_h||_Omega for a scalar field on the same mesh.
double divergence_error(const DiscreteField& u_h, const DiscreteField& q_h,
                        const QuadratureConfig& quad);

/// |w|_beta with w = exact - field (or w = field when `exact` is absent):
/// sum over all edges of \int |beta.n| |[w (x) n]|^2, where the jump on a
/// wall edge is the one-sided trace.
double jump_seminorm(const DiscreteField& field, const VectorField& beta,
                     const QuadratureConfig& quad, const VectorField* exact = nullptr);

/// Norms are computed with `error_quad`; missing exact data leaves the
/// corresponding entries empty.
ErrorReport error_norms(const DiscreteField& u_h, const DiscreteField& p_h,
                        const ProblemSpec& problem, const QuadratureConfig& error_quad);

struct SolveOptions {
  MeshPattern pattern = MeshPattern::union_jack;
  /// Defaults to QuadratureConfig::for_element_degree(k) for the velocity.
  std::optional<QuadratureConfig> quad;
  SolverOptions solver;
};

QuadratureConfig assembly_quadrature(ElementPair pair, const SolveOptions& options);

struct SolveResult {
  Discretization discretization;
  std::shared_ptr<const DiscreteField> velocity;
  std::shared_ptr<const DiscreteField> pressure;
  double multiplier = 0.0;
  SolveReport solve;
  ErrorReport errors;
  double wall_seconds = 0.0;  ///< assembly + solve + error evaluation
};

/// Meshes with N cells per side (x-periodic when the problem asks for it),
/// assembles, solves and evaluates the errors with the assembly quadrature
/// elevated by two.
SolveResult solve_problem(const ProblemSpec& problem, ElementPair pair, int cells_per_side,
                          const SolveOptions& options = {});

struct ConvergenceRow {
  int cells_per_side = 0;
  ErrorReport errors;
  std::optional<double> vel_rate;
  std::optional<double> pres_rate;
  std::optional<double> proj_pres_rate;
  std::optional<double> jump_rate;
  double wall_seconds = 0.0;
};

struct ConvergenceTable {
  std::string problem;
  ElementPair pair = ElementPair::bdm1p0;
  std::vector<ConvergenceRow> rows;
};

/// log(e_prev / e) / log(h_prev / h); empty when either error is not
/// positive.
std::optional<double> observed_rate(std::optional<double> e_prev, std::optional<double> e,
                                    double h_prev, double h);

/// One solve per N; N must be strictly increasing (h decreasing). Solver
/// errors are rethrown with the offending h in the message.
ConvergenceTable convergence_study(const ProblemSpec& problem, ElementPair pair,
                                   const std::vector<int>& cells_per_side,
                                   const SolveOptions& options = {});

struct EquivalenceReport {
  double max_discrepancy = 0.0;  ///< max |u_RT - u_BDM| over cell quadrature points
  double max_velocity = 0.0;     ///< max |u_BDM| over the same points
  SolveResult rt;
  SolveResult bdm;
};

/// Solves with (RT_1, P_1dc) and (BDM_1, P_0) on the same mesh.
EquivalenceReport check_rt_bdm_equivalence(const ProblemSpec& problem, int cells_per_side,
                                           const SolveOptions& options = {});

}  // namespace hdivflow
