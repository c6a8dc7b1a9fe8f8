#include "hdivflow/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "hdivflow/errors.hpp"
#include "hdivflow/interpolation.hpp"

namespace hdivflow {

namespace {

std::vector<Vec2> rule_points(const QuadRuleTri& rule) {
  std::vector<Vec2> out;
  out.reserve(rule.points.size());
  for (const auto& b : rule.points) out.push_back(to_reference(b));
  return out;
}

// sum_T |T| sum_q w_q g(cell, q, x_q)
template <class F>
double integrate(const Mesh& mesh, const QuadratureConfig& quad, F&& g) {
  quad.validate();
  const auto& rule = triangle_rule(quad.volume_degree);
  const auto points = rule_points(rule);
  double total = 0.0;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto geo = CellGeometry::from_vertices(mesh.cell_vertices(c));
    double cell = 0.0;
    g.begin(c, points);
    for (std::size_t q = 0; q < points.size(); ++q)
      cell += rule.weights[q] * g(static_cast<int>(q), geo.map(points[q]));
    total += geo.area() * cell;
  }
  return total;
}

struct NoCache {
  void begin(Index, const std::vector<Vec2>&) {}
};

void require_same_mesh(const FeSpace& a, const FeSpace& b) {
  if (&a.mesh() != &b.mesh()) throw InvalidArgument("fields live on different meshes");
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

double l2_norm(const Mesh& mesh, const VectorField& v, const QuadratureConfig& quad) {
  struct : NoCache {
    const VectorField* v;
    double operator()(int, const Vec2& x) const { return (*v)(x).squaredNorm(); }
  } g;
  g.v = &v;
  return std::sqrt(integrate(mesh, quad, g));
}

double l2_norm(const Mesh& mesh, const ScalarField& v, const QuadratureConfig& quad) {
  struct : NoCache {
    const ScalarField* v;
    double operator()(int, const Vec2& x) const {
      const double s = (*v)(x);
      return s * s;
    }
  } g;
  g.v = &v;
  return std::sqrt(integrate(mesh, quad, g));
}

double l2_error(const DiscreteField& u_h, const VectorField& exact, const QuadratureConfig& quad) {
  struct {
    const DiscreteField* u;
    const VectorField* exact;
    std::vector<Vec2> values;
    void begin(Index c, const std::vector<Vec2>& pts) { values = evaluate_vector(*u, c, pts); }
    double operator()(int q, const Vec2& x) const { return ((*exact)(x) - values[q]).squaredNorm(); }
  } g{&u_h, &exact, {}};
  return std::sqrt(integrate(u_h.space().mesh(), quad, g));
}

double l2_error(const DiscreteField& p_h, const ScalarField& exact, const QuadratureConfig& quad) {
  struct {
    const DiscreteField* p;
    const ScalarField* exact;
    std::vector<double> values;
    void begin(Index c, const std::vector<Vec2>& pts) { values = evaluate_scalar(*p, c, pts); }
    double operator()(int q, const Vec2& x) const {
      const double d = (*exact)(x) - values[q];
      return d * d;
    }
  } g{&p_h, &exact, {}};
  return std::sqrt(integrate(p_h.space().mesh(), quad, g));
}

double l2_distance(const DiscreteField& a, const DiscreteField& b, const QuadratureConfig& quad) {
  require_same_mesh(a.space(), b.space());
  struct {
    const DiscreteField *a, *b;
    std::vector<double> va, vb;
    void begin(Index c, const std::vector<Vec2>& pts) {
      va = evaluate_scalar(*a, c, pts);
      vb = evaluate_scalar(*b, c, pts);
    }
    double operator()(int q, const Vec2&) const {
      const double d = va[q] - vb[q];
      return d * d;
    }
  } g{&a, &b, {}, {}};
  return std::sqrt(integrate(a.space().mesh(), quad, g));
}

double divergence_l2(const DiscreteField& u_h, const QuadratureConfig& quad) {
  struct {
    const DiscreteField* u;
    std::vector<double> div;
    void begin(Index c, const std::vector<Vec2>& pts) { div = evaluate_divergence(*u, c, pts); }
    double operator()(int q, const Vec2&) const { return div[q] * div[q]; }
  } g{&u_h, {}};
  return std::sqrt(integrate(u_h.space().mesh(), quad, g));
}

double divergence_error(const DiscreteField& u_h, const DiscreteField& q_h,
                        const QuadratureConfig& quad) {
  require_same_mesh(u_h.space(), q_h.space());
  struct {
    const DiscreteField *u, *p;
    std::vector<double> div, val;
    void begin(Index c, const std::vector<Vec2>& pts) {
      div = evaluate_divergence(*u, c, pts);
      val = evaluate_scalar(*p, c, pts);
    }
    double operator()(int q, const Vec2&) const {
      const double d = div[q] - val[q];
      return d * d;
    }
  } g{&u_h, &q_h, {}, {}};
  return std::sqrt(integrate(u_h.space().mesh(), quad, g));
}

double jump_seminorm(const DiscreteField& field, const VectorField& beta,
                     const QuadratureConfig& quad, const VectorField* exact) {
  quad.validate();
  const Mesh& mesh = field.space().mesh();
  const auto& rule = edge_rule(quad.edge_degree);
  const std::size_t nq = rule.points.size();
  std::vector<Vec2> ref(nq), phys(nq);
  std::array<std::vector<Vec2>, 2> w;
  double total = 0.0;
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const auto& adj = mesh.edge_cells(e);
    const int n_sides = adj[1] < 0 ? 1 : 2;
    Vec2 normal = Vec2::Zero();
    double length = 0.0;
    std::array<std::vector<Vec2>, 2> x;
    for (int s = 0; s < n_sides; ++s) {
      const auto ends = mesh.edge_endpoints_in_cell(e, adj[s]);
      const Vec2 t = ends[1] - ends[0];
      if (s == 0) {
        length = t.norm();
        normal = Vec2(t.y(), -t.x()) / length;
      }
      const auto geo = CellGeometry::from_vertices(mesh.cell_vertices(adj[s]));
      x[s].resize(nq);
      for (std::size_t q = 0; q < nq; ++q) {
        x[s][q] = ends[0] + rule.points[q] * t;
        ref[q] = geo.pull_back(x[s][q]);
      }
      w[s] = evaluate_vector(field, adj[s], ref);
      if (exact)
        for (std::size_t q = 0; q < nq; ++q) w[s][q] = (*exact)(x[s][q]) - w[s][q];
    }
    double edge = 0.0;
    for (std::size_t q = 0; q < nq; ++q) {
      const double flux = std::abs(beta(x[0][q]).dot(normal));
      if (flux == 0.0) continue;
      const Vec2 jump = n_sides == 2 ? Vec2(w[0][q] - w[1][q]) : w[0][q];
      edge += rule.weights[q] * flux * jump.squaredNorm();
    }
    total += length * edge;
  }
  return std::sqrt(total);
}

ErrorReport error_norms(const DiscreteField& u_h, const DiscreteField& p_h,
                        const ProblemSpec& problem, const QuadratureConfig& error_quad) {
  require_same_mesh(u_h.space(), p_h.space());
  const Mesh& mesh = u_h.space().mesh();
  ErrorReport r;
  r.h = 1.0 / mesh.cells_per_side();
  r.n_dofs = u_h.space().size() + p_h.space().size();
  r.div_l2 = divergence_l2(u_h, error_quad);
  {
    struct {
      const DiscreteField* u;
      std::vector<Vec2> values;
      void begin(Index c, const std::vector<Vec2>& pts) { values = evaluate_vector(*u, c, pts); }
      double operator()(int q, const Vec2&) const { return values[q].squaredNorm(); }
    } g{&u_h, {}};
    r.velocity_l2 = std::sqrt(integrate(mesh, error_quad, g));
  }

  if (problem.exact_u) {
    const VectorField& u = *problem.exact_u;
    const double norm = l2_norm(mesh, u, error_quad);
    const double err = l2_error(u_h, u, error_quad);
    r.vel_l2_rel = norm > 0.0 ? err / norm : err;
    r.jump_seminorm = jump_seminorm(u_h, problem.beta, error_quad, &u);
    struct {
      const DiscreteField* u;
      const VectorField* exact;
      const ScalarField* sigma;
      std::vector<Vec2> values;
      void begin(Index c, const std::vector<Vec2>& pts) { values = evaluate_vector(*u, c, pts); }
      double operator()(int q, const Vec2& x) const {
        return (*sigma)(x) * ((*exact)(x) - values[q]).squaredNorm();
      }
    } g{&u_h, &u, &problem.sigma, {}};
    r.weighted_vel = std::sqrt(integrate(mesh, error_quad, g));
  }
  if (problem.exact_p) {
    const ScalarField& p = *problem.exact_p;
    const double norm = l2_norm(mesh, p, error_quad);
    const double err = l2_error(p_h, p, error_quad);
    r.pres_relative = norm > 1e-14;
    r.pres_l2_rel = r.pres_relative ? err / norm : err;
    const auto projected = l2_project(p_h.space_ptr(), p, error_quad);
    r.proj_pres_error = l2_distance(projected, p_h, error_quad);
  }
  return r;
}

QuadratureConfig assembly_quadrature(ElementPair pair, const SolveOptions& options) {
  if (options.quad) return *options.quad;
  return QuadratureConfig::for_element_degree(velocity_spec(pair).degree);
}

SolveResult solve_problem(const ProblemSpec& problem, ElementPair pair, int cells_per_side,
                          const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const QuadratureConfig quad = assembly_quadrature(pair, options);
  quad.validate();
  auto mesh = std::make_shared<const Mesh>(
      build_unit_square_mesh(cells_per_side, options.pattern, problem.periodic_x));

  SolveResult out;
  out.discretization = make_discretization(mesh, pair);
  const auto& d = out.discretization;
  AssemblyOptions aopt;
  aopt.quad = quad;
  const SaddleSystem system = assemble(*d.velocity, *d.pressure, problem, aopt);
  out.solve = solve(system, options.solver);

  const Eigen::VectorXd& x = out.solve.solution;
  out.velocity = std::make_shared<const DiscreteField>(d.velocity, x.head(system.n_u));
  out.pressure = std::make_shared<const DiscreteField>(d.pressure, x.segment(system.n_u, system.n_p));
  out.multiplier = x[system.multiplier_index()];
  out.errors = error_norms(*out.velocity, *out.pressure, problem, quad.elevated(2));
  out.wall_seconds = elapsed_since(start);
  return out;
}

std::optional<double> observed_rate(std::optional<double> e_prev, std::optional<double> e,
                                    double h_prev, double h) {
  if (!e_prev || !e || !(*e_prev > 0.0) || !(*e > 0.0) || h_prev == h) return std::nullopt;
  return std::log(*e_prev / *e) / std::log(h_prev / h);
}

ConvergenceTable convergence_study(const ProblemSpec& problem, ElementPair pair,
                                   const std::vector<int>& cells_per_side,
                                   const SolveOptions& options) {
  if (cells_per_side.empty()) throw InvalidArgument("convergence study needs at least one mesh");
  for (std::size_t i = 1; i < cells_per_side.size(); ++i)
    if (cells_per_side[i] <= cells_per_side[i - 1])
      throw InvalidArgument("mesh sizes must be strictly decreasing");

  ConvergenceTable table;
  table.problem = problem.label;
  table.pair = pair;
  for (int n : cells_per_side) {
    ConvergenceRow row;
    row.cells_per_side = n;
    try {
      const SolveResult result = solve_problem(problem, pair, n, options);
      row.errors = result.errors;
      row.wall_seconds = result.wall_seconds;
    } catch (const SingularSystemError& e) {
      throw SingularSystemError(std::string(e.what()) + " (h = 1/" + std::to_string(n) + ")",
                                e.pivot());
    } catch (const ConvergenceFailure& e) {
      throw ConvergenceFailure(std::string(e.what()) + " (h = 1/" + std::to_string(n) + ")",
                               e.residual());
    }
    if (!table.rows.empty()) {
      const ErrorReport& prev = table.rows.back().errors;
      const ErrorReport& cur = row.errors;
      row.vel_rate = observed_rate(prev.vel_l2_rel, cur.vel_l2_rel, prev.h, cur.h);
      row.pres_rate = observed_rate(prev.pres_l2_rel, cur.pres_l2_rel, prev.h, cur.h);
      row.proj_pres_rate = observed_rate(prev.proj_pres_error, cur.proj_pres_error, prev.h, cur.h);
      row.jump_rate = observed_rate(prev.jump_seminorm, cur.jump_seminorm, prev.h, cur.h);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

EquivalenceReport check_rt_bdm_equivalence(const ProblemSpec& problem, int cells_per_side,
                                           const SolveOptions& options) {
  EquivalenceReport out;
  out.rt = solve_problem(problem, ElementPair::rt1p1dc, cells_per_side, options);
  out.bdm = solve_problem(problem, ElementPair::bdm1p0, cells_per_side, options);
  const QuadratureConfig quad = assembly_quadrature(ElementPair::bdm1p0, options);
  const auto points = rule_points(triangle_rule(quad.volume_degree));
  const Mesh& mesh = *out.bdm.discretization.mesh;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto a = evaluate_vector(*out.rt.velocity, c, points);
    const auto b = evaluate_vector(*out.bdm.velocity, c, points);
    for (std::size_t q = 0; q < points.size(); ++q) {
      out.max_discrepancy = std::max(out.max_discrepancy, (a[q] - b[q]).norm());
      out.max_velocity = std::max(out.max_velocity, b[q].norm());
    }
  }
  return out;
}

}  // namespace hdivflow
