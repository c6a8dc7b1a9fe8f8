#include <cmath>
#include <memory>
#include <random>

#include <Eigen/LU>

#include <gtest/gtest.h>

#include <hdivflow/analysis.hpp>
#include <hdivflow/errors.hpp>
#include <hdivflow/interpolation.hpp>

using namespace hdivflow;

namespace {

std::shared_ptr<const Mesh> unit_mesh(int n, MeshPattern pattern = MeshPattern::union_jack) {
  return std::make_shared<const Mesh>(build_unit_square_mesh(n, pattern));
}

Eigen::VectorXd random_vector(Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(n);
  for (Index i = 0; i < n; ++i) x[i] = normal(rng);
  return x;
}

// Physical point on edge e at parameter s (lower vertex -> higher vertex),
// pulled back into cell c.
Vec2 edge_point_in_cell(const Mesh& m, Index e, Index c, double s) {
  const auto ends = m.edge_endpoints_in_cell(e, c);
  const auto g = CellGeometry::from_vertices(m.cell_vertices(c));
  return g.pull_back(ends[0] + s * (ends[1] - ends[0]));
}

// Element of RT_1 with nonzero normal trace on the walls.
Vec2 rt1_field(const Vec2& p) {
  const double x = p.x(), y = p.y();
  return Vec2(0.3 + x - 2 * y, -0.5 + x + y) + (0.7 * x - 0.4 * y) * p;
}

}  // namespace

TEST(ReferenceBasis, DualToFunctionals) {
  for (const auto& spec : {SpaceSpec::rt(0), SpaceSpec::rt(1), SpaceSpec::bdm(1), SpaceSpec::p_disc(0),
                           SpaceSpec::p_disc(1)}) {
    const auto& basis = ReferenceBasis::get(spec);
    const Eigen::MatrixXd m = basis.functional_matrix();
    EXPECT_LE((m - Eigen::MatrixXd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff(), 1e-12)
        << spec.name();
  }
}

TEST(ReferenceBasis, Dimensions) {
  EXPECT_EQ(ReferenceBasis::get(SpaceSpec::rt(0)).size(), 3);
  EXPECT_EQ(ReferenceBasis::get(SpaceSpec::rt(1)).size(), 8);
  EXPECT_EQ(ReferenceBasis::get(SpaceSpec::bdm(1)).size(), 6);
  EXPECT_EQ(ReferenceBasis::get(SpaceSpec::p_disc(1)).size(), 3);
  EXPECT_EQ(SpaceSpec::rt(1).dofs_per_edge(), 2);
  EXPECT_EQ(SpaceSpec::bdm(1).dofs_per_edge(), 2);
  EXPECT_THROW(SpaceSpec::bdm(0).validate(), InvalidArgument);
  EXPECT_THROW(SpaceSpec::rt(2).validate(), InvalidArgument);
}

TEST(ReferenceBasis, Rt0NormalComponentIsConstant) {
  const auto& basis = ReferenceBasis::get(SpaceSpec::rt(0));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double expected = (i == j ? 1.0 : 0.0) / reference_edge_length(j);
      for (double s : {0.0, 0.3, 0.8, 1.0}) {
        const double flux = basis.value(i, reference_edge_point(j, s)).dot(reference_edge_normal(j));
        EXPECT_NEAR(flux, expected, 1e-13);
      }
    }
  }
}

TEST(ReferenceBasis, DivergenceDegrees) {
  const Vec2 pts[] = {{0.1, 0.2}, {0.6, 0.1}, {0.2, 0.7}, {0.3, 0.3}, {0.05, 0.05}};
  // RT_1: div is affine, so it is fixed by three points.
  const auto& rt = ReferenceBasis::get(SpaceSpec::rt(1));
  for (int i = 0; i < rt.size(); ++i) {
    Eigen::Matrix3d a;
    Eigen::Vector3d d;
    for (int q = 0; q < 3; ++q) {
      a.row(q) << 1.0, pts[q].x(), pts[q].y();
      d[q] = rt.divergence(i, pts[q]);
    }
    const Eigen::Vector3d c = a.partialPivLu().solve(d);
    for (int q = 3; q < 5; ++q)
      EXPECT_NEAR(c[0] + c[1] * pts[q].x() + c[2] * pts[q].y(), rt.divergence(i, pts[q]), 1e-12);
  }
  // BDM_1: any combination has a constant divergence.
  const auto& bdm = ReferenceBasis::get(SpaceSpec::bdm(1));
  const Eigen::VectorXd c = random_vector(6, 3);
  const auto div = [&](const Vec2& p) {
    double s = 0.0;
    for (int i = 0; i < 6; ++i) s += c[i] * bdm.divergence(i, p);
    return s;
  };
  for (const auto& p : pts) EXPECT_NEAR(div(p), div(pts[0]), 1e-12);
}

TEST(Piola, IdentityAndScaling) {
  const auto id = CellGeometry::from_vertices({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)});
  const Vec2 v(0.3, -1.2);
  EXPECT_NEAR((piola_value(id, v) - v).norm(), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(piola_divergence(id, 2.5), 2.5);

  const double s = 0.5;
  const auto scaled = CellGeometry::from_vertices({Vec2(0, 0), Vec2(s, 0), Vec2(0, s)});
  EXPECT_NEAR(piola_divergence(scaled, 2.5), 2.5 / (s * s), 1e-14);
  EXPECT_NEAR((inverse_piola(scaled, piola_value(scaled, v)) - v).norm(), 0.0, 1e-15);

  EXPECT_THROW(CellGeometry::from_vertices({Vec2(0, 0), Vec2(1, 1), Vec2(2, 2)}), GeometryError);
}

TEST(Piola, EdgeMomentOfSingleDof) {
  const auto mesh = unit_mesh(3);
  for (const auto& spec : {SpaceSpec::rt(0), SpaceSpec::rt(1), SpaceSpec::bdm(1)}) {
    const auto space = std::make_shared<const FeSpace>(mesh, spec);
    const int k = spec.dofs_per_edge();
    const auto& rule = edge_rule(9);
    for (Index e = 0; e < mesh->num_edges(); ++e) {
      if (mesh->is_boundary(e)) continue;
      const auto g = mesh->edge_geometry(e);
      // Edge DOFs come first, k per interior edge, in edge order.
      Index first = -1;
      for (Index c : {mesh->edge_cells(e)[0]})
        for (int l = 0; l < 3; ++l)
          if (mesh->cell_edges(c)[l].edge == e) first = space->dofs().dofs(c)[l * k];
      ASSERT_GE(first, 0);
      for (int j = 0; j < k; ++j) {
        DiscreteField field(space);
        field.coefficients()[first + j] = 1.0;
        for (Index c : mesh->edge_cells(e)) {
          for (int m = 0; m < k; ++m) {
            double moment = 0.0;
            for (std::size_t q = 0; q < rule.points.size(); ++q) {
              const Vec2 ref = edge_point_in_cell(*mesh, e, c, rule.points[q]);
              const Vec2 val = evaluate_vector(field, c, std::span<const Vec2>(&ref, 1))[0];
              moment += rule.weights[q] * val.dot(g.normal) * shifted_legendre(m, rule.points[q]);
            }
            EXPECT_NEAR(moment * g.length, m == j ? 1.0 : 0.0, 1e-12);
          }
        }
      }
    }
  }
}

TEST(DofMap, Counts) {
  EXPECT_EQ(build_dof_map(build_unit_square_mesh(1, MeshPattern::right), SpaceSpec::rt(0)).n_global, 1);
  const Mesh m2 = build_unit_square_mesh(2);
  EXPECT_EQ(build_dof_map(m2, SpaceSpec::bdm(1)).n_global, 16);
  EXPECT_EQ(build_dof_map(m2, SpaceSpec::p_disc(0)).n_global, 8);
  EXPECT_EQ(build_dof_map(m2, SpaceSpec::p_disc(1)).n_global, 24);
  EXPECT_EQ(build_dof_map(m2, SpaceSpec::rt(1)).n_global, 16 + 16);
  EXPECT_EQ(build_dof_map(m2, SpaceSpec::rt(1), NormalTrace::free).n_global, 32 + 16);
}

TEST(DofMap, EdgeDofsSharedInteriorUnshared) {
  const Mesh m = build_unit_square_mesh(4);
  const DofMap d = build_dof_map(m, SpaceSpec::rt(1));
  std::vector<int> uses(d.n_global, 0);
  for (Index c = 0; c < m.num_cells(); ++c) {
    const auto dofs = d.dofs(c);
    for (int l = 0; l < 3; ++l) {
      const Index e = m.cell_edges(c)[l].edge;
      for (int j = 0; j < 2; ++j) EXPECT_EQ(dofs[2 * l + j] == kNoDof, m.is_boundary(e));
    }
    for (Index g : dofs)
      if (g != kNoDof) ++uses[g];
  }
  const Index edge_dofs = d.n_global - 2 * m.num_cells();
  for (Index g = 0; g < d.n_global; ++g) EXPECT_EQ(uses[g], g < edge_dofs ? 2 : 1);
}

TEST(DiscreteField, NormalContinuity) {
  const auto mesh = unit_mesh(4);
  for (const auto& spec : {SpaceSpec::rt(0), SpaceSpec::rt(1), SpaceSpec::bdm(1)}) {
    const auto space = std::make_shared<const FeSpace>(mesh, spec);
    const DiscreteField field(space, random_vector(space->size(), 11));
    for (Index e = 0; e < mesh->num_edges(); ++e) {
      const Vec2 n = mesh->edge_geometry(e).normal;
      for (double s : {0.1, 0.5, 0.77}) {
        double flux[2] = {0.0, 0.0};
        int side = 0;
        for (Index c : mesh->edge_cells(e)) {
          if (c < 0) continue;
          const Vec2 ref = edge_point_in_cell(*mesh, e, c, s);
          flux[side++] = evaluate_vector(field, c, std::span<const Vec2>(&ref, 1))[0].dot(n);
        }
        if (mesh->is_boundary(e))
          EXPECT_LE(std::abs(flux[0]), 1e-12);
        else
          EXPECT_LE(std::abs(flux[0] - flux[1]), 1e-12);
      }
    }
  }
}

TEST(DiscreteField, ZeroAndErrors) {
  const auto mesh = unit_mesh(2);
  const auto space = std::make_shared<const FeSpace>(mesh, SpaceSpec::rt(1));
  const DiscreteField zero(space);
  const Vec2 p(0.25, 0.25);
  for (Index c = 0; c < mesh->num_cells(); ++c)
    EXPECT_EQ(evaluate_vector(zero, c, std::span<const Vec2>(&p, 1))[0].norm(), 0.0);
  EXPECT_THROW(evaluate_vector(zero, mesh->num_cells(), std::span<const Vec2>(&p, 1)), InvalidArgument);
  EXPECT_THROW(evaluate_scalar(zero, 0, std::span<const Vec2>(&p, 1)), InvalidArgument);
}

TEST(Interpolation, ReproducesSpaceElements) {
  const auto mesh = unit_mesh(3);
  const auto space = std::make_shared<const FeSpace>(mesh, SpaceSpec::rt(1), NormalTrace::free);
  const auto quad = QuadratureConfig::for_element_degree(1);
  const DiscreteField pi = rt_interpolate(space, rt1_field, quad);
  const Vec2 pts[] = {{0.1, 0.1}, {0.5, 0.2}, {0.2, 0.6}};
  for (Index c = 0; c < mesh->num_cells(); ++c) {
    const auto g = space->geometry(c);
    const auto vals = evaluate_vector(pi, c, pts);
    for (int q = 0; q < 3; ++q) EXPECT_LE((vals[q] - rt1_field(g.map(pts[q]))).norm(), 1e-12);
  }
}

TEST(Interpolation, CommutingDiagram) {
  const auto mesh = unit_mesh(4);
  const VectorField v = [](const Vec2& x) { return Vec2(std::sin(x.y()) + x.x() * x.x(), std::sin(x.x())); };
  const ScalarField div = [](const Vec2& x) { return 2.0 * x.x(); };
  const QuadratureConfig quad{kMaxTriangleDegree, kMaxEdgeDegree};
  for (int k : {0, 1}) {
    const auto space = std::make_shared<const FeSpace>(mesh, SpaceSpec::rt(k), NormalTrace::free);
    const auto scalar = std::make_shared<const FeSpace>(mesh, SpaceSpec::p_disc(k));
    EXPECT_LE(divergence_error(rt_interpolate(space, v, quad), l2_project(scalar, div, quad), quad), 1e-10);
  }
}

TEST(Interpolation, RejectsNonRtSpace) {
  const auto space = std::make_shared<const FeSpace>(unit_mesh(2), SpaceSpec::bdm(1));
  EXPECT_THROW(rt_interpolate(space, rt1_field, QuadratureConfig{}), InvalidArgument);
}

TEST(L2Projection, ReproducesPolynomialsAndAverages) {
  const auto mesh = unit_mesh(3);
  const QuadratureConfig quad{};
  const auto p1 = std::make_shared<const FeSpace>(mesh, SpaceSpec::p_disc(1));
  const ScalarField affine = [](const Vec2& x) { return 1.5 - 2.0 * x.x() + 0.25 * x.y(); };
  EXPECT_LE(l2_error(l2_project(p1, affine, quad), affine, quad), 1e-12);

  const auto p0 = std::make_shared<const FeSpace>(mesh, SpaceSpec::p_disc(0));
  const DiscreteField avg = l2_project(p0, [](const Vec2& x) { return x.x(); }, quad);
  const Vec2 any(0.2, 0.2);
  for (Index c = 0; c < mesh->num_cells(); ++c) {
    const auto v = mesh->cell_vertices(c);
    EXPECT_NEAR(evaluate_scalar(avg, c, std::span<const Vec2>(&any, 1))[0],
                (v[0].x() + v[1].x() + v[2].x()) / 3.0, 1e-14);
  }
}

TEST(L2Projection, VortexPressureRate) {
  const auto p = *vortex_problem(1, 1.0).exact_p;
  const auto quad = QuadratureConfig::for_element_degree(1);
  double prev = 0.0;
  for (int n : {8, 16, 32}) {
    const auto space = std::make_shared<const FeSpace>(unit_mesh(n), SpaceSpec::p_disc(1));
    const double e = l2_error(l2_project(space, p, quad), p, quad.elevated(2));
    if (prev > 0.0) EXPECT_NEAR(std::log2(prev / e), 2.0, 0.1);
    prev = e;
  }
}

TEST(DivergenceFree, RtSolutionIsCellwiseLinear) {
  const auto r = solve_problem(vortex_problem(1, 100.0), ElementPair::rt1p1dc, 4);
  const auto& u = *r.velocity;
  const Vec2 verts[] = {{0, 0}, {1, 0}, {0, 1}};
  const Vec2 probes[] = {{0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}, {1.0 / 3, 1.0 / 3}, {0.1, 0.7}};
  for (Index c = 0; c < u.space().mesh().num_cells(); ++c) {
    const auto at_v = evaluate_vector(u, c, verts);
    const auto at_p = evaluate_vector(u, c, probes);
    for (int q = 0; q < 5; ++q) {
      const Vec2& x = probes[q];
      const Vec2 linear = (1 - x.x() - x.y()) * at_v[0] + x.x() * at_v[1] + x.y() * at_v[2];
      EXPECT_LE((linear - at_p[q]).norm(), 1e-10);
    }
  }
}
