#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include <hdivflow/interpolation.hpp>
#include <hdivflow/linear_solver.hpp>

#include "commands.hpp"

namespace hdivflow::cli {

namespace {

using Rng = std::mt19937_64;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

CheckOutcome outcome(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok, std::move(detail)};
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

CheckOutcome mesh_topology(Rng& rng) {
  double worst_area = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const int n = uniform_int(rng, 1, 16);
    const auto pattern = static_cast<MeshPattern>(uniform_int(rng, 0, 2));
    const Mesh mesh = build_unit_square_mesh(n, pattern);
    double area = 0.0;
    for (Index c = 0; c < mesh.num_cells(); ++c) area += mesh.cell_area(c);
    worst_area = std::max(worst_area, std::abs(area - 1.0));
    Index boundary = 0;
    for (Index e = 0; e < mesh.num_edges(); ++e) boundary += mesh.is_boundary(e) ? 1 : 0;
    const bool ok = mesh.num_vertices() - mesh.num_edges() + mesh.num_cells() == 1 &&
                    boundary == 4 * n && mesh.num_cells() == 2 * n * n;
    if (!ok) return outcome("mesh_topology", false, "N = " + std::to_string(n));
  }
  return outcome("mesh_topology", worst_area < 1e-12, "area defect " + sci(worst_area));
}

CheckOutcome quadrature_exactness(Rng& rng) {
  double worst = 0.0;
  for (int degree = 1; degree <= kMaxTriangleDegree; ++degree) {
    const auto& rule = triangle_rule(degree);
    const int a = uniform_int(rng, 0, degree);
    const int b = uniform_int(rng, 0, degree - a);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 p = to_reference(rule.points[q]);
      sum += rule.weights[q] * std::pow(p.x(), a) * std::pow(p.y(), b);
    }
    const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
    worst = std::max(worst, std::abs(0.5 * sum - exact) / exact);
  }
  return outcome("quadrature_exactness", worst < 1e-12, "max relative error " + sci(worst));
}

CheckOutcome reference_duality() {
  double worst = 0.0;
  for (const auto& spec : {SpaceSpec::rt(0), SpaceSpec::rt(1), SpaceSpec::bdm(1)}) {
    const auto& basis = ReferenceBasis::get(spec);
    const Eigen::MatrixXd m = basis.functional_matrix();
    worst = std::max(worst, (m - Eigen::MatrixXd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff());
  }
  return outcome("reference_duality", worst < 1e-12, "max |N - I| " + sci(worst));
}

CheckOutcome convection_identity(Rng& rng) {
  const auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(uniform_int(rng, 2, 5)));
  // Curl of x^2 (1-x)^2 y^2 (1-y)^2: degree 7, tangential on the walls, so
  // the rules below integrate every term exactly.
  const double scale = std::uniform_real_distribution<double>(1.0, 50.0)(rng);
  const VectorField beta = [scale](const Vec2& p) {
    const double x = p.x(), y = p.y();
    const double gx = x * x * (1 - x) * (1 - x), gy = y * y * (1 - y) * (1 - y);
    const double dgx = 2 * x * (1 - x) * (1 - 2 * x), dgy = 2 * y * (1 - y) * (1 - 2 * y);
    return Vec2(scale * gx * dgy, -scale * dgx * gy);
  };
  const QuadratureConfig quad{kMaxTriangleDegree, kMaxEdgeDegree};
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (const auto& spec : {SpaceSpec::rt(1), SpaceSpec::bdm(1)}) {
    const auto space = std::make_shared<const FeSpace>(mesh, spec);
    const auto op = assemble_convection(*space, beta, quad);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd x(space->size());
      for (Index i = 0; i < x.size(); ++i) x[i] = normal(rng);
      const DiscreteField v(space, x);
      const double vol = x.dot(op.volume * x), fac = x.dot(op.facet * x);
      const double jump = jump_seminorm(v, beta, quad);
      const double half = 0.5 * jump * jump;
      worst = std::max(worst, std::abs(-vol - fac + half) / (std::abs(vol) + std::abs(fac) + half));
    }
  }
  return outcome("convection_identity", worst <= 1e-10, "max relative defect " + sci(worst));
}

CheckOutcome commuting_diagram(Rng& rng) {
  const auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(uniform_int(rng, 2, 8)));
  const VectorField v = [](const Vec2& x) { return Vec2(std::sin(x.y()), std::sin(x.x())); };
  const QuadratureConfig quad{kMaxTriangleDegree, kMaxEdgeDegree};
  double worst = 0.0;
  for (int k : {0, 1}) {
    const auto space = std::make_shared<const FeSpace>(mesh, SpaceSpec::rt(k), NormalTrace::free);
    const auto pressure = std::make_shared<const FeSpace>(mesh, SpaceSpec::p_disc(k));
    const DiscreteField pi = rt_interpolate(space, v, quad);
    const DiscreteField pdiv = l2_project(pressure, [](const Vec2&) { return 0.0; }, quad);
    worst = std::max(worst, divergence_error(pi, pdiv, quad));
  }
  return outcome("commuting_diagram", worst <= 1e-10, "||div Pi v - P div v|| " + sci(worst));
}

CheckOutcome assembly_determinism(Rng& rng) {
  const auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(uniform_int(rng, 2, 6)));
  const ProblemSpec problem = vortex_problem(uniform_int(rng, 1, 3), 10.0);
  for (auto pair : {ElementPair::rt0p0, ElementPair::rt1p1dc, ElementPair::bdm1p0}) {
    const auto d = make_discretization(mesh, pair);
    AssemblyOptions forward;
    forward.quad = QuadratureConfig::for_element_degree(velocity_spec(pair).degree);
    AssemblyOptions backward = forward;
    backward.reverse_cell_order = true;
    const auto a = assemble(*d.velocity, *d.pressure, problem, forward);
    const auto b = assemble(*d.velocity, *d.pressure, problem, backward);
    const Eigen::SparseMatrix<double> diff = a.matrix - b.matrix;
    const bool same = a.matrix.nonZeros() == b.matrix.nonZeros() && diff.norm() == 0.0 &&
                      (a.rhs - b.rhs).norm() == 0.0;
    if (!same) return outcome("assembly_determinism", false, std::string(to_string(pair)));
  }
  return outcome("assembly_determinism", true, "");
}

CheckOutcome solve_invariants(Rng& rng) {
  const int n = uniform_int(rng, 4, 8);
  const ProblemSpec problem = vortex_problem(1, 100.0);
  double div_rel = 0.0, lambda_rel = 0.0, recheck = 0.0;
  for (auto pair : {ElementPair::rt0p0, ElementPair::rt1p1dc, ElementPair::bdm1p0}) {
    const auto r = solve_problem(problem, pair, n);
    div_rel = std::max(div_rel, r.errors.div_l2_rel());
    lambda_rel = std::max(lambda_rel, std::abs(r.multiplier) / r.solve.solution.norm());
    // Independent residual: re-assemble and multiply entry by entry.
    AssemblyOptions opt;
    opt.quad = QuadratureConfig::for_element_degree(velocity_spec(pair).degree);
    const auto sys = assemble(*r.discretization.velocity, *r.discretization.pressure, problem, opt);
    Eigen::VectorXd ax = Eigen::VectorXd::Zero(sys.size());
    for (int k = 0; k < sys.matrix.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, k); it; ++it)
        ax[it.row()] += it.value() * r.solve.solution[it.col()];
    const double res = (sys.rhs - ax).norm() / std::max(sys.rhs.norm(), 1e-300);
    recheck = std::max(recheck, std::abs(res - r.solve.relative_residual));
  }
  const bool ok = div_rel <= 1e-9 && lambda_rel <= 1e-8 && recheck <= 1e-13;
  return outcome("solve_invariants", ok,
                 "div " + sci(div_rel) + ", lambda " + sci(lambda_rel) + ", residual recheck " +
                     sci(recheck));
}

CheckOutcome rt_bdm_equivalence(Rng& rng) {
  const int n = uniform_int(rng, 4, 8);
  const auto r = check_rt_bdm_equivalence(vortex_problem(1, 100.0), n);
  const double rel = r.max_discrepancy / r.max_velocity;
  return outcome("rt_bdm_equivalence", rel <= 1e-8, "relative discrepancy " + sci(rel));
}

CheckOutcome shear_reproduction(Rng& rng) {
  const int n = uniform_int(rng, 3, 6);
  const double sigma = std::uniform_real_distribution<double>(1.0, 100.0)(rng);
  const auto constant = solve_problem(shear_problem(ShearProfile::constant, sigma), ElementPair::rt0p0, n);
  const auto linear = solve_problem(shear_problem(ShearProfile::linear, sigma), ElementPair::rt1p1dc, n);
  const double e0 = *constant.errors.vel_l2_rel, e1 = *linear.errors.vel_l2_rel;
  return outcome("shear_reproduction", e0 <= 1e-9 && e1 <= 1e-9,
                 "RT0 constant " + sci(e0) + ", RT1 linear " + sci(e1));
}

CheckOutcome vortex_data(Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double wall = 0.0, div = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const auto p = vortex_problem(n, 1.0);
    for (int i = 0; i < 50; ++i) {
      const double s = unit(rng);
      wall = std::max({wall, std::abs(p.beta(Vec2(s, 0.0)).y()), std::abs(p.beta(Vec2(s, 1.0)).y()),
                       std::abs(p.beta(Vec2(0.0, s)).x()), std::abs(p.beta(Vec2(1.0, s)).x())});
      const Vec2 x(unit(rng), unit(rng));
      const double h = 1e-5;
      const double d = (p.beta(x + Vec2(h, 0)).x() - p.beta(x - Vec2(h, 0)).x() +
                        p.beta(x + Vec2(0, h)).y() - p.beta(x - Vec2(0, h)).y()) / (2 * h);
      div = std::max(div, std::abs(d) / (n * n * M_PI * M_PI));
    }
  }
  return outcome("vortex_data", wall <= 1e-12 && div <= 1e-6,
                 "wall flux " + sci(wall) + ", divergence " + sci(div));
}

CheckOutcome config_round_trip(Rng& rng) {
  RunConfig c;
  c.command = static_cast<Command>(uniform_int(rng, 0, 3));
  c.problem = static_cast<ProblemKind>(uniform_int(rng, 0, 2));
  c.n = uniform_int(rng, 1, 8);
  c.sigma = std::uniform_real_distribution<double>(0.1, 1e6)(rng);
  c.element = static_cast<ElementPair>(uniform_int(rng, 0, 2));
  c.cells = {uniform_int(rng, 3, 10), uniform_int(rng, 11, 20)};
  c.pattern = static_cast<MeshPattern>(uniform_int(rng, 0, 2));
  if (uniform_int(rng, 0, 1)) c.quad = QuadratureConfig{uniform_int(rng, 1, 10), uniform_int(rng, 1, 19)};
  c.tolerance = std::uniform_real_distribution<double>(1e-14, 1e-6)(rng);
  c.out = "out_" + std::to_string(uniform_int(rng, 0, 99));
  if (uniform_int(rng, 0, 1)) c.format = static_cast<OutputFormat>(uniform_int(rng, 0, 2));
  c.seed = rng();
  c.timing = uniform_int(rng, 0, 1) == 1;
  std::stringstream text;
  write_config(c, text);
  RunConfig back;
  read_config(back, text);
  return outcome("config_round_trip", back == c, "");
}

}  // namespace

std::vector<CheckOutcome> run_property_checks(std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::function<CheckOutcome(Rng&)>> checks = {
      mesh_topology,
      quadrature_exactness,
      [](Rng&) { return reference_duality(); },
      convection_identity,
      commuting_diagram,
      assembly_determinism,
      solve_invariants,
      rt_bdm_equivalence,
      shear_reproduction,
      vortex_data,
      config_round_trip,
  };
  std::vector<CheckOutcome> out;
  for (const auto& check : checks) {
    try {
      out.push_back(check(rng));
    } catch (const std::exception& e) {
      out.push_back(outcome("exception", false, e.what()));
    }
  }
  return out;
}

}  // namespace hdivflow::cli
