#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include <hdivflow/analysis.hpp>
#include <hdivflow/errors.hpp>
#include <hdivflow/interpolation.hpp>
#include <hdivflow/report_io.hpp>

using namespace hdivflow;

TEST(Analysis, ExactFieldsGiveZeroError) {
  // u = (y, 0) lies in RT_1 and p = 0 in P_1dc.
  const auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(4));
  const auto u_space = std::make_shared<const FeSpace>(mesh, SpaceSpec::rt(1), NormalTrace::free);
  const auto p_space = std::make_shared<const FeSpace>(mesh, SpaceSpec::p_disc(1));
  const ProblemSpec problem = shear_problem(ShearProfile::linear, 1.0);
  const auto quad = QuadratureConfig::for_element_degree(1);
  const DiscreteField u = rt_interpolate(u_space, *problem.exact_u, quad);
  const DiscreteField p(p_space);
  const ErrorReport r = error_norms(u, p, problem, quad);
  EXPECT_LE(*r.vel_l2_rel, 1e-13);
  EXPECT_LE(*r.pres_l2_rel, 1e-15);
  EXPECT_FALSE(r.pres_relative);
  EXPECT_LE(*r.jump_seminorm, 1e-13);
  EXPECT_LE(*r.proj_pres_error, 1e-15);
  EXPECT_LE(r.div_l2, 1e-13);
  EXPECT_DOUBLE_EQ(r.h, 0.25);
}

TEST(Analysis, InterpolantErrorMatchesDirectComputation) {
  const auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(8));
  const ProblemSpec problem = vortex_problem(1, 100.0);
  const auto d = make_discretization(mesh, ElementPair::rt1p1dc);
  const auto quad = QuadratureConfig::for_element_degree(1);
  const DiscreteField u = rt_interpolate(d.velocity, *problem.exact_u, quad);
  const DiscreteField p = l2_project(d.pressure, *problem.exact_p, quad);
  const ErrorReport r = error_norms(u, p, problem, quad);
  EXPECT_EQ(*r.vel_l2_rel, l2_error(u, *problem.exact_u, quad) / l2_norm(*mesh, *problem.exact_u, quad));
  EXPECT_LE(*r.proj_pres_error, 1e-13);
  EXPECT_NEAR(*r.weighted_vel, 10.0 * l2_error(u, *problem.exact_u, quad), 1e-12);
}

TEST(Analysis, ObservedRate) {
  EXPECT_NEAR(*observed_rate(1.0, 0.25, 0.1, 0.05), 2.0, 1e-15);
  EXPECT_NEAR(*observed_rate(0.8, 0.4, 0.5, 0.25), 1.0, 1e-15);
  EXPECT_FALSE(observed_rate(std::nullopt, 0.25, 0.1, 0.05));
  EXPECT_FALSE(observed_rate(0.0, 0.25, 0.1, 0.05));
  EXPECT_FALSE(observed_rate(1.0, 0.5, 0.1, 0.1));
}

TEST(Analysis, StudyRejectsUnorderedMeshes) {
  const auto p = vortex_problem(1, 1.0);
  EXPECT_THROW(convergence_study(p, ElementPair::bdm1p0, {8, 4}), InvalidArgument);
  EXPECT_THROW(convergence_study(p, ElementPair::bdm1p0, {4, 4}), InvalidArgument);
  EXPECT_THROW(convergence_study(p, ElementPair::bdm1p0, {}), InvalidArgument);
}

TEST(Analysis, BdmAtTwentyCells) {
  const auto r = solve_problem(vortex_problem(1, 100.0), ElementPair::bdm1p0, 20);
  EXPECT_NEAR(*r.errors.vel_l2_rel, 0.0030, 0.15 * 0.0030);
  EXPECT_NEAR(*r.errors.pres_l2_rel, 0.074, 0.15 * 0.074);
  EXPECT_LE(r.errors.div_l2_rel(), 1e-9);
  EXPECT_LE(r.solve.relative_residual, 1e-10);
}

TEST(Analysis, RatesAndSuperconvergence) {
  const auto t = convergence_study(vortex_problem(1, 100.0), ElementPair::bdm1p0, {8, 16, 32});
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_FALSE(t.rows[0].vel_rate);
  for (std::size_t i = 1; i < 3; ++i) {
    EXPECT_GE(*t.rows[i].vel_rate, 1.5);
    EXPECT_NEAR(*t.rows[i].pres_rate, 1.0, 0.15);
    EXPECT_GE(*t.rows[i].proj_pres_rate, 1.3);
    EXPECT_TRUE(t.rows[i].jump_rate);
  }
}

TEST(Analysis, QuadratureConverged) {
  const auto p = vortex_problem(1, 100.0);
  for (auto pair : {ElementPair::bdm1p0, ElementPair::rt1p1dc}) {
    SolveOptions raised;
    raised.quad = QuadratureConfig::for_element_degree(1).elevated(2);
    const auto a = solve_problem(p, pair, 10);
    const auto b = solve_problem(p, pair, 10, raised);
    EXPECT_LE(std::abs(*a.errors.vel_l2_rel / *b.errors.vel_l2_rel - 1.0), 0.005);
    EXPECT_LE(std::abs(*a.errors.pres_l2_rel / *b.errors.pres_l2_rel - 1.0), 0.005);
  }
}

TEST(Analysis, RtBdmEquivalence) {
  const auto r = check_rt_bdm_equivalence(vortex_problem(1, 100.0), 10);
  EXPECT_LE(r.max_discrepancy, 1e-8 * r.max_velocity);
  EXPECT_NEAR(*r.rt.errors.vel_l2_rel, *r.bdm.errors.vel_l2_rel, 1e-10);
  for (int n : {2, 4}) {
    const auto s = check_rt_bdm_equivalence(vortex_problem(n, 100.0), 8);
    EXPECT_NEAR(*s.rt.errors.vel_l2_rel, *s.bdm.errors.vel_l2_rel, 1e-10 * *s.bdm.errors.vel_l2_rel);
  }
}

TEST(Analysis, EquivalenceWithoutAdvection) {
  const auto r = check_rt_bdm_equivalence(reaction_problem(1, 1.0), 6);
  EXPECT_LE(r.max_discrepancy, 1e-10);
}

TEST(ReportIo, ConvergenceCsv) {
  ConvergenceTable t;
  ConvergenceRow a, b;
  a.cells_per_side = 10;
  a.errors.h = 0.1;
  a.errors.n_dofs = 12;
  a.errors.vel_l2_rel = 0.5;
  b.cells_per_side = 20;
  b.errors.h = 0.05;
  b.errors.n_dofs = 40;
  b.errors.vel_l2_rel = 0.125;
  b.vel_rate = 2.0;
  t.rows = {a, b};
  std::ostringstream out;
  write_convergence_csv(t, out);
  EXPECT_EQ(out.str(),
            "h,n_dofs,vel_l2_rel,vel_rate,pres_l2_rel,pres_rate,jump_seminorm,proj_pres_error,div_l2\n"
            "0.1,12,0.5,,,,,,0\n"
            "0.05,40,0.125,2,,,,,0\n");
}

TEST(ReportIo, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(format_optional(std::nullopt), "");
}
