#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include <hdivflow/analysis.hpp>
#include <hdivflow/errors.hpp>
#include <hdivflow/interpolation.hpp>

using namespace hdivflow;

namespace {

std::shared_ptr<const Mesh> unit_mesh(int n, MeshPattern pattern = MeshPattern::union_jack) {
  return std::make_shared<const Mesh>(build_unit_square_mesh(n, pattern));
}

AssemblyOptions default_options(ElementPair pair) {
  AssemblyOptions o;
  o.quad = QuadratureConfig::for_element_degree(velocity_spec(pair).degree);
  return o;
}

const VectorField kUnitX = [](const Vec2&) { return Vec2(1.0, 0.0); };

Index interior_edge(const Mesh& m) {
  for (Index e = 0; e < m.num_edges(); ++e)
    if (!m.is_boundary(e)) return e;
  return -1;
}

}  // namespace

// N=1 "right" mesh, RT_0, beta = (1,0). The single DOF lives on the
// diagonal; its basis function is x - (0,1) in the upper cell and
// (1,0) - x in the lower one. By hand:
//   interior facet  1/3 (upwind from the upper cell)
//   outflow wall    1/3 (x = 1), inflow wall 0
//   volume          -1/6 + 1/6 = 0
//   |v|_beta^2      2/3 (diagonal) + 1/3 + 1/3 (walls x = 0, 1)
TEST(Assembly, HandComputedTwoCellFacet) {
  const auto mesh = unit_mesh(1, MeshPattern::right);
  const auto space = std::make_shared<const FeSpace>(mesh, SpaceSpec::rt(0));
  ASSERT_EQ(space->size(), 1);
  const QuadratureConfig quad{4, 5};

  const auto facet = assemble_facet(*space, kUnitX, interior_edge(*mesh), quad);
  double block = 0.0;
  for (const auto& t : facet) block += t.value();
  EXPECT_NEAR(block, 1.0 / 3.0, 1e-14);

  Eigen::VectorXd one(1);
  one << 1.0;
  const DiscreteField v(space, one);
  const FormTerms t = apply_form(v, v, kUnitX, quad);
  EXPECT_NEAR(t.volume, 0.0, 1e-14);
  EXPECT_NEAR(t.facet, 2.0 / 3.0, 1e-14);
  const double jump = jump_seminorm(v, kUnitX, quad);
  EXPECT_NEAR(jump * jump, 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(t.total(), 0.5 * jump * jump, 1e-14);
}

TEST(Assembly, WallFluxIsRejected) {
  const auto mesh = unit_mesh(1, MeshPattern::right);
  const auto d = make_discretization(mesh, ElementPair::rt0p0);
  ProblemSpec p = vortex_problem(1, 1.0);
  p.beta = kUnitX;
  EXPECT_THROW(assemble(*d.velocity, *d.pressure, p, default_options(ElementPair::rt0p0)),
               ProblemSetupError);
}

TEST(Assembly, IncompatiblePairs) {
  EXPECT_THROW(check_compatible(SpaceSpec::rt(1), SpaceSpec::p_disc(0)), InvalidArgument);
  EXPECT_THROW(check_compatible(SpaceSpec::bdm(1), SpaceSpec::p_disc(1)), InvalidArgument);
  EXPECT_NO_THROW(check_compatible(SpaceSpec::rt(0), SpaceSpec::p_disc(0)));
  EXPECT_THROW(parse_element_pair("bdm2p1"), InvalidArgument);
  const auto mesh = unit_mesh(2);
  const FeSpace u(mesh, SpaceSpec::rt(1)), p(mesh, SpaceSpec::p_disc(0));
  EXPECT_THROW(assemble(u, p, vortex_problem(1, 1.0), AssemblyOptions{}), InvalidArgument);
}

TEST(Assembly, NoAdvectionMeansNoConvection) {
  const auto mesh = unit_mesh(3);
  const ProblemSpec p = reaction_problem(1, 1.0);
  for (auto pair : {ElementPair::rt1p1dc, ElementPair::bdm1p0}) {
    const auto d = make_discretization(mesh, pair);
    const auto op = assemble_convection(*d.velocity, p.beta, default_options(pair).quad);
    EXPECT_EQ(op.facet.norm(), 0.0);
    EXPECT_EQ(op.volume.norm(), 0.0);
    // The full system is then mass + coupling only.
    auto o = default_options(pair);
    const auto full = assemble(*d.velocity, *d.pressure, p, o);
    o.terms = kReaction | kPressureCoupling;
    const auto reduced = assemble(*d.velocity, *d.pressure, p, o);
    EXPECT_EQ(Eigen::SparseMatrix<double>(full.matrix - reduced.matrix).norm(), 0.0);
  }
}

TEST(Assembly, WallFacetsVanishForTangentialFlow) {
  const auto mesh = unit_mesh(4);
  const ProblemSpec p = vortex_problem(2, 1.0);
  const FeSpace space(mesh, SpaceSpec::rt(1), NormalTrace::free);
  for (Index e = 0; e < mesh->num_edges(); ++e) {
    if (!mesh->is_boundary(e)) continue;
    for (const auto& t : assemble_facet(space, p.beta, e, QuadratureConfig{}))
      EXPECT_LE(std::abs(t.value()), 1e-12);
  }
}

TEST(Assembly, ConstraintBlock) {
  const auto mesh = unit_mesh(3);
  const ProblemSpec problem = vortex_problem(1, 10.0);
  for (auto pair : {ElementPair::rt0p0, ElementPair::rt1p1dc, ElementPair::bdm1p0}) {
    const auto d = make_discretization(mesh, pair);
    const auto s = assemble(*d.velocity, *d.pressure, problem, default_options(pair));
    ASSERT_EQ(s.size(), s.n_u + s.n_p + 1);
    const Eigen::MatrixXd a(s.matrix);
    const Index m = s.multiplier_index();
    // Column and row of lambda hold the integrals of the pressure basis.
    const int per_cell = pressure_spec(pair).dofs_per_cell();
    for (Index k = 0; k < s.n_p; ++k) {
      const double expected = mesh->cell_area(k / per_cell) / per_cell;
      EXPECT_NEAR(a(s.n_u + k, m), expected, 1e-15);
      EXPECT_NEAR(a(m, s.n_u + k), expected, 1e-15);
    }
    // Constant pressure: the constraint row integrates to the area and the
    // gradient of a constant is zero against every velocity test function.
    Eigen::VectorXd x = Eigen::VectorXd::Zero(s.size());
    x.segment(s.n_u, s.n_p) = s.pressure_constant;
    const Eigen::VectorXd ax = a * x;
    EXPECT_NEAR(ax[m], 1.0, 1e-14);
    EXPECT_LE(ax.head(s.n_u).cwiseAbs().maxCoeff(), 1e-13);
    // B and -B^T appear exactly.
    const Eigen::MatrixXd b = a.block(s.n_u, 0, s.n_p, s.n_u);
    const Eigen::MatrixXd bt = a.block(0, s.n_u, s.n_u, s.n_p);
    EXPECT_EQ((b.transpose() + bt).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Assembly, IndependentOfCellOrder) {
  const auto mesh = unit_mesh(5);
  const ProblemSpec problem = vortex_problem(2, 100.0);
  for (auto pair : {ElementPair::rt0p0, ElementPair::rt1p1dc, ElementPair::bdm1p0}) {
    const auto d = make_discretization(mesh, pair);
    auto forward = default_options(pair), backward = forward;
    backward.reverse_cell_order = true;
    const auto a = assemble(*d.velocity, *d.pressure, problem, forward);
    const auto b = assemble(*d.velocity, *d.pressure, problem, backward);
    ASSERT_EQ(a.matrix.nonZeros(), b.matrix.nonZeros());
    EXPECT_EQ(Eigen::SparseMatrix<double>(a.matrix - b.matrix).norm(), 0.0);
    EXPECT_EQ((a.rhs - b.rhs).norm(), 0.0);
  }
}

TEST(Assembly, ZeroFieldGivesZeroForm) {
  const auto space = std::make_shared<const FeSpace>(unit_mesh(3), SpaceSpec::bdm(1));
  const DiscreteField zero(space);
  EXPECT_EQ(apply_form(zero, zero, vortex_problem(1, 1.0).beta, QuadratureConfig{}).total(), 0.0);
}

TEST(Assembly, ConvectionIdentityOnRandomFields) {
  const auto mesh = unit_mesh(8);
  const ProblemSpec p = vortex_problem(1, 1.0);
  const QuadratureConfig quad{kMaxTriangleDegree, kMaxEdgeDegree};
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (const auto& spec : {SpaceSpec::rt(0), SpaceSpec::rt(1), SpaceSpec::bdm(1)}) {
    const auto space = std::make_shared<const FeSpace>(mesh, spec);
    const auto op = assemble_convection(*space, p.beta, quad);
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXd x(space->size());
      for (Index i = 0; i < x.size(); ++i) x[i] = normal(rng);
      const DiscreteField v(space, x);
      const FormTerms t = apply_form(v, v, p.beta, quad);
      // Matrix and form evaluation agree.
      EXPECT_NEAR(x.dot(op.volume * x), t.volume, 1e-12 * (1 + std::abs(t.volume)));
      EXPECT_NEAR(x.dot(op.facet * x), t.facet, 1e-12 * (1 + std::abs(t.facet)));
      const double j = jump_seminorm(v, p.beta, quad);
      const double scale = std::abs(t.volume) + std::abs(t.facet) + 0.5 * j * j;
      EXPECT_LE(std::abs(t.total() - 0.5 * j * j), 1e-10 * scale) << spec.name();
    }
  }
}

TEST(Assembly, ConsistencyResidualDecays) {
  const ProblemSpec problem = vortex_problem(1, 100.0);
  double prev = 0.0;
  for (int n : {4, 8, 16}) {
    const auto d = make_discretization(unit_mesh(n), ElementPair::rt1p1dc);
    const auto o = default_options(ElementPair::rt1p1dc);
    const auto s = assemble(*d.velocity, *d.pressure, problem, o);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(s.size());
    x.head(s.n_u) = rt_interpolate(d.velocity, *problem.exact_u, o.quad).coefficients();
    x.segment(s.n_u, s.n_p) = l2_project(d.pressure, *problem.exact_p, o.quad).coefficients();
    const double r = (s.matrix * x - s.rhs).norm() / s.rhs.norm();
    if (prev > 0.0) EXPECT_LT(r, 0.6 * prev) << n;
    prev = r;
  }
}

TEST(Assembly, MatrixDump) {
  Eigen::SparseMatrix<double> m(2, 2);
  m.insert(1, 0) = 2.5;
  std::ostringstream out;
  write_matrix_coordinates(m, out);
  EXPECT_EQ(out.str(), "1 0 2.5\n");
}
