#include "hdivflow/assembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "hdivflow/errors.hpp"

namespace hdivflow {

ElementPair parse_element_pair(std::string_view name) {
  if (name == "rt0p0") return ElementPair::rt0p0;
  if (name == "rt1p1dc") return ElementPair::rt1p1dc;
  if (name == "bdm1p0") return ElementPair::bdm1p0;
  throw InvalidArgument("unknown element pair '" + std::string(name) + "'");
}

std::string_view to_string(ElementPair pair) {
  switch (pair) {
    case ElementPair::rt0p0: return "rt0p0";
    case ElementPair::rt1p1dc: return "rt1p1dc";
    case ElementPair::bdm1p0: return "bdm1p0";
  }
  return "?";
}

SpaceSpec velocity_spec(ElementPair pair) {
  switch (pair) {
    case ElementPair::rt0p0: return SpaceSpec::rt(0);
    case ElementPair::rt1p1dc: return SpaceSpec::rt(1);
    case ElementPair::bdm1p0: return SpaceSpec::bdm(1);
  }
  throw InvalidArgument("unknown element pair");
}

SpaceSpec pressure_spec(ElementPair pair) {
  switch (pair) {
    case ElementPair::rt0p0: return SpaceSpec::p_disc(0);
    case ElementPair::rt1p1dc: return SpaceSpec::p_disc(1);
    case ElementPair::bdm1p0: return SpaceSpec::p_disc(0);
  }
  throw InvalidArgument("unknown element pair");
}

void check_compatible(const SpaceSpec& velocity, const SpaceSpec& pressure) {
  const bool ok =
      pressure.family == Family::P_disc &&
      ((velocity.family == Family::RT && pressure.degree == velocity.degree) ||
       (velocity.family == Family::BDM && pressure.degree == velocity.degree - 1));
  if (!ok)
    throw InvalidArgument("incompatible velocity/pressure pair " + velocity.name() + "/" +
                          pressure.name());
}

Discretization make_discretization(std::shared_ptr<const Mesh> mesh, ElementPair pair) {
  Discretization d;
  d.mesh = mesh;
  d.velocity = std::make_shared<const FeSpace>(mesh, velocity_spec(pair));
  d.pressure = std::make_shared<const FeSpace>(mesh, pressure_spec(pair));
  return d;
}

namespace {

// Triplets tagged with the cell or edge they came from. Summing duplicates in
// (col, row, source) order makes the result independent of the loop order.
class KeyedTriplets {
 public:
  void add(Index row, Index col, Index source, double value) {
    items_.push_back({row, col, source, value});
  }

  Eigen::SparseMatrix<double> finish(Index rows, Index cols) {
    // Stable: equal keys from one source keep their (fixed) emission order.
    std::stable_sort(items_.begin(), items_.end(), [](const Item& a, const Item& b) {
      if (a.col != b.col) return a.col < b.col;
      if (a.row != b.row) return a.row < b.row;
      return a.source < b.source;
    });
    std::vector<Eigen::Triplet<double>> merged;
    merged.reserve(items_.size() / 2);
    for (std::size_t i = 0; i < items_.size();) {
      std::size_t j = i;
      double sum = 0.0;
      while (j < items_.size() && items_[j].row == items_[i].row && items_[j].col == items_[i].col)
        sum += items_[j++].value;
      merged.emplace_back(items_[i].row, items_[i].col, sum);
      i = j;
    }
    items_.clear();
    Eigen::SparseMatrix<double> m(rows, cols);
    m.setFromTriplets(merged.begin(), merged.end());
    return m;
  }

 private:
  struct Item {
    Index row, col, source;
    double value;
  };
  std::vector<Item> items_;
};

std::vector<Vec2> reference_points(const QuadRuleTri& rule) {
  std::vector<Vec2> out;
  out.reserve(rule.points.size());
  for (const auto& b : rule.points) out.push_back(to_reference(b));
  return out;
}

// Velocity basis tabulated on each local edge, in both traversal directions,
// at the edge rule points (parameter t from the lower to the higher vertex).
class EdgeTables {
 public:
  EdgeTables(const SpaceSpec& spec, const QuadRule1D& rule) {
    for (int edge = 0; edge < 3; ++edge) {
      for (int rev = 0; rev < 2; ++rev) {
        std::vector<Vec2> pts;
        for (double t : rule.points) pts.push_back(reference_edge_point(edge, rev ? 1.0 - t : t));
        tables_[edge * 2 + rev] = tabulate(spec, std::span<const Vec2>(pts));
        points_[edge * 2 + rev] = std::move(pts);
      }
    }
  }

  // `sign` is the cell's orientation of the edge; -1 means the cell walks
  // the edge from the higher to the lower vertex.
  const Tabulation& table(int local_edge, int sign) const {
    return tables_[local_edge * 2 + (sign < 0 ? 1 : 0)];
  }
  const std::vector<Vec2>& points(int local_edge, int sign) const {
    return points_[local_edge * 2 + (sign < 0 ? 1 : 0)];
  }

 private:
  std::array<Tabulation, 6> tables_;
  std::array<std::vector<Vec2>, 6> points_;
};

struct FacetSide {
  Index cell;
  int local_edge;
  int sign;
  CellGeometry geometry;
  CellBasis basis;
};

// Emits the facet block of one edge through `emit(row, col, value)`.
template <class Emit>
void facet_block(const FeSpace& space, const VectorField& beta, Index edge,
                 const QuadRule1D& rule, const EdgeTables& tables, WallFlux wall,
                 double wall_tolerance, std::array<FacetSide, 2>& sides, Emit&& emit) {
  const Mesh& mesh = space.mesh();
  const auto& adj = mesh.edge_cells(edge);
  const auto& local = mesh.edge_local_index(edge);
  const int n_sides = adj[1] < 0 ? 1 : 2;
  for (int s = 0; s < n_sides; ++s) {
    auto& side = sides[s];
    side.cell = adj[s];
    side.local_edge = local[s];
    side.sign = mesh.cell_edges(side.cell)[side.local_edge].sign;
    side.geometry = space.geometry(side.cell);
    map_cell_basis(space, side.cell, side.geometry, tables.table(side.local_edge, side.sign),
                   side.basis);
  }

  const EdgeGeometry eg = mesh.edge_geometry(edge);
  const auto& ref0 = tables.points(sides[0].local_edge, sides[0].sign);
  const int n = sides[0].basis.n;
  // Local matrix over [side 0 DOFs, side 1 DOFs].
  std::vector<double> local_matrix(static_cast<std::size_t>(4) * n * n, 0.0);
  const auto at = [n](int row, int col) { return static_cast<std::size_t>(row) * 2 * n + col; };
  bool touched = false;

  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Vec2 x = sides[0].geometry.map(ref0[q]);
    const double flux = beta(x).dot(eg.normal);
    const double ds = rule.weights[q] * eg.length;

    if (n_sides == 1) {
      const double outward = sides[0].sign * flux;
      if (wall == WallFlux::require_zero) {
        if (std::abs(outward) > wall_tolerance) {
          std::ostringstream msg;
          msg << "beta.n = " << outward << " on the wall at (" << x.x() << ", " << x.y()
              << "); the advective field must be tangential";
          throw ProblemSetupError(msg.str());
        }
        continue;
      }
      if (!(outward > 0.0)) continue;  // inflow: zero exterior state
      const auto& b = sides[0].basis;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          local_matrix[at(i, j)] += ds * outward * b.values[b.at(q, j)].dot(b.values[b.at(q, i)]);
      touched = true;
      continue;
    }

    if (flux == 0.0) continue;
    // Upwind side: the cell whose outward normal has beta.n > 0.
    const int up = sides[0].sign * flux > 0.0 ? 0 : 1;
    const int down = 1 - up;
    const double weight = ds * std::abs(flux);
    const auto& bu = sides[up].basis;
    const auto& bd = sides[down].basis;
    for (int j = 0; j < n; ++j) {
      const Vec2& trial = bu.values[bu.at(q, j)];
      for (int i = 0; i < n; ++i) {
        local_matrix[at(up * n + i, up * n + j)] += weight * trial.dot(bu.values[bu.at(q, i)]);
        local_matrix[at(down * n + i, up * n + j)] -= weight * trial.dot(bd.values[bd.at(q, i)]);
      }
    }
    touched = true;
  }
  if (!touched) return;

  const DofMap& dofs = space.dofs();
  for (int rs = 0; rs < n_sides; ++rs) {
    const auto rdofs = dofs.dofs(sides[rs].cell);
    for (int i = 0; i < n; ++i) {
      if (rdofs[i] == kNoDof) continue;
      for (int cs = 0; cs < n_sides; ++cs) {
        const auto cdofs = dofs.dofs(sides[cs].cell);
        for (int j = 0; j < n; ++j) {
          if (cdofs[j] == kNoDof) continue;
          const double v = local_matrix[at(rs * n + i, cs * n + j)];
          if (v != 0.0) emit(rdofs[i], cdofs[j], v);
        }
      }
    }
  }
}

// Momentum block of one cell: -(u, beta.grad v) when `beta` is given plus
// (sigma u, v) when `sigma` is given. local[i * n + j] has test i, trial j.
void momentum_cell_matrix(const CellBasis& basis, const CellGeometry& g, const QuadRuleTri& rule,
                          const std::vector<Vec2>& points, const VectorField* beta,
                          const ScalarField* sigma, std::vector<double>& local) {
  const int n = basis.n;
  local.assign(static_cast<std::size_t>(n) * n, 0.0);
  const double area = g.area();
  for (std::size_t q = 0; q < points.size(); ++q) {
    const double dx = rule.weights[q] * area;
    const Vec2 x = g.map(points[q]);
    const Vec2 b = beta ? (*beta)(x) : Vec2::Zero();
    const double s = sigma ? (*sigma)(x) : 0.0;
    const int qi = static_cast<int>(q);
    for (int i = 0; i < n; ++i) {
      const Vec2& vi = basis.values[basis.at(qi, i)];
      const Vec2 directional = basis.jacobians[basis.at(qi, i)] * b;
      for (int j = 0; j < n; ++j) {
        const Vec2& uj = basis.values[basis.at(qi, j)];
        local[i * n + j] += dx * (s * uj.dot(vi) - uj.dot(directional));
      }
    }
  }
}

}  // namespace

SaddleSystem assemble(const FeSpace& velocity, const FeSpace& pressure,
                      const ProblemSpec& problem, const AssemblyOptions& options) {
  check_compatible(velocity.spec(), pressure.spec());
  if (&velocity.mesh() != &pressure.mesh())
    throw InvalidArgument("velocity and pressure spaces live on different meshes");
  options.quad.validate();

  const Mesh& mesh = velocity.mesh();
  SaddleSystem sys;
  sys.n_u = velocity.size();
  sys.n_p = pressure.size();
  const Index n_total = sys.size();
  sys.rhs = Eigen::VectorXd::Zero(n_total);
  sys.pressure_constant = Eigen::VectorXd::Ones(sys.n_p);  // nodal and P0 bases sum to one

  const auto& trule = triangle_rule(options.quad.volume_degree);
  const auto points = reference_points(trule);
  const Tabulation vtab = tabulate(velocity.spec(), std::span<const Vec2>(points));
  const Tabulation ptab = tabulate(pressure.spec(), std::span<const Vec2>(points));
  const int nu = vtab.n_basis;
  const int np = ptab.n_basis;

  KeyedTriplets triplets;
  KeyedTriplets load;  // rhs as a one-column matrix, summed in key order
  CellBasis vb;
  std::vector<double> a_local(static_cast<std::size_t>(nu) * nu);
  std::vector<double> b_local(static_cast<std::size_t>(np) * nu);
  std::vector<double> c_local(np), f_local(nu);

  const Index n_cells = mesh.num_cells();
  for (Index step = 0; step < n_cells; ++step) {
    const Index c = options.reverse_cell_order ? n_cells - 1 - step : step;
    const auto g = velocity.geometry(c);
    map_cell_basis(velocity, c, g, vtab, vb);
    std::fill(b_local.begin(), b_local.end(), 0.0);
    std::fill(c_local.begin(), c_local.end(), 0.0);
    std::fill(f_local.begin(), f_local.end(), 0.0);
    const double area = g.area();
    momentum_cell_matrix(vb, g, trule, points,
                         (options.terms & kConvectionVolume) ? &problem.beta : nullptr,
                         (options.terms & kReaction) ? &problem.sigma : nullptr, a_local);

    for (int q = 0; q < vtab.n_points; ++q) {
      const double dx = trule.weights[q] * area;
      const Vec2 f = problem.source(g.map(points[q]));
      for (int i = 0; i < nu; ++i) f_local[i] += dx * f.dot(vb.values[vb.at(q, i)]);
      for (int k = 0; k < np; ++k) {
        const double qk = ptab.scalars[ptab.at(q, k)];
        c_local[k] += dx * qk;
        for (int j = 0; j < nu; ++j) b_local[k * nu + j] += dx * qk * vb.divergence[vb.at(q, j)];
      }
    }

    const auto udofs = velocity.dofs().dofs(c);
    const auto pdofs = pressure.dofs().dofs(c);
    for (int i = 0; i < nu; ++i) {
      if (udofs[i] == kNoDof) continue;
      load.add(udofs[i], 0, c, f_local[i]);
      if (options.terms & (kConvectionVolume | kReaction)) {
        for (int j = 0; j < nu; ++j)
          if (udofs[j] != kNoDof) triplets.add(udofs[i], udofs[j], c, a_local[i * nu + j]);
      }
    }
    if (options.terms & kPressureCoupling) {
      const Index lambda = sys.multiplier_index();
      for (int k = 0; k < np; ++k) {
        const Index prow = sys.n_u + pdofs[k];
        for (int j = 0; j < nu; ++j) {
          if (udofs[j] == kNoDof) continue;
          const double b = b_local[k * nu + j];
          triplets.add(prow, udofs[j], c, b);
          triplets.add(udofs[j], prow, c, -b);
        }
        triplets.add(prow, lambda, c, c_local[k]);
        triplets.add(lambda, prow, c, c_local[k]);
      }
    }
  }

  // Facets: the wall check always runs; interior edges only carry the flux.
  const auto& erule = edge_rule(options.quad.edge_degree);
  const EdgeTables etables(velocity.spec(), erule);
  std::array<FacetSide, 2> sides;
  const Index n_edges = mesh.num_edges();
  const bool with_flux = options.terms & kFacetFlux;
  for (Index step = 0; step < n_edges; ++step) {
    const Index e = options.reverse_cell_order ? n_edges - 1 - step : step;
    if (!with_flux && !mesh.is_boundary(e)) continue;
    facet_block(velocity, problem.beta, e, erule, etables, WallFlux::require_zero,
                options.wall_flux_tolerance, sides,
                [&](Index r, Index col, double v) { triplets.add(r, col, n_cells + e, v); });
  }

  sys.matrix = triplets.finish(n_total, n_total);
  sys.rhs = Eigen::VectorXd(load.finish(n_total, 1));
  return sys;
}

std::vector<Eigen::Triplet<double>> assemble_facet(const FeSpace& velocity,
                                                   const VectorField& beta, Index edge,
                                                   const QuadratureConfig& quad, WallFlux wall,
                                                   double wall_flux_tolerance) {
  if (!velocity.spec().is_vector()) throw InvalidArgument("facet flux needs a velocity space");
  const auto& rule = edge_rule(quad.edge_degree);
  const EdgeTables tables(velocity.spec(), rule);
  std::array<FacetSide, 2> sides;
  std::vector<Eigen::Triplet<double>> out;
  facet_block(velocity, beta, edge, rule, tables, wall, wall_flux_tolerance, sides,
              [&](Index r, Index c, double v) { out.emplace_back(r, c, v); });
  return out;
}

ConvectionOperator assemble_convection(const FeSpace& velocity, const VectorField& beta,
                                       const QuadratureConfig& quad, WallFlux wall) {
  if (!velocity.spec().is_vector())
    throw InvalidArgument("convection operator needs a velocity space");
  quad.validate();
  const Mesh& mesh = velocity.mesh();
  const Index n = velocity.size();

  const auto& trule = triangle_rule(quad.volume_degree);
  const auto points = reference_points(trule);
  const Tabulation table = tabulate(velocity.spec(), std::span<const Vec2>(points));
  KeyedTriplets volume;
  CellBasis basis;
  std::vector<double> local;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto g = velocity.geometry(c);
    map_cell_basis(velocity, c, g, table, basis);
    momentum_cell_matrix(basis, g, trule, points, &beta, nullptr, local);
    const auto dofs = velocity.dofs().dofs(c);
    const int nb = basis.n;
    for (int i = 0; i < nb; ++i) {
      if (dofs[i] == kNoDof) continue;
      for (int j = 0; j < nb; ++j)
        if (dofs[j] != kNoDof) volume.add(dofs[i], dofs[j], c, local[i * nb + j]);
    }
  }

  const auto& erule = edge_rule(quad.edge_degree);
  const EdgeTables etables(velocity.spec(), erule);
  std::array<FacetSide, 2> sides;
  KeyedTriplets facet;
  for (Index e = 0; e < mesh.num_edges(); ++e)
    facet_block(velocity, beta, e, erule, etables, wall, 1e-10, sides,
                [&](Index r, Index col, double v) { facet.add(r, col, e, v); });

  return {volume.finish(n, n), facet.finish(n, n)};
}

FormTerms apply_form(const DiscreteField& u, const DiscreteField& v, const VectorField& beta,
                     const QuadratureConfig& quad) {
  if (&u.space() != &v.space() &&
      (u.space().spec() != v.space().spec() || &u.space().mesh() != &v.space().mesh() ||
       u.space().normal_trace() != v.space().normal_trace()))
    throw InvalidArgument("apply_form needs both fields in the same velocity space");
  const auto op = assemble_convection(u.space(), beta, quad, WallFlux::upwind);
  return {v.coefficients().dot(op.volume * u.coefficients()),
          v.coefficients().dot(op.facet * u.coefficients())};
}

void write_matrix_coordinates(const Eigen::SparseMatrix<double>& matrix, std::ostream& out) {
  const auto precision = out.precision(17);
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, k); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  out.precision(precision);
}

}  // namespace hdivflow
