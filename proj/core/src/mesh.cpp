#include "hdivflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <string>

#include "hdivflow/errors.hpp"

namespace hdivflow {

MeshPattern parse_mesh_pattern(std::string_view name) {
  if (name == "union_jack" || name == "unionjack") return MeshPattern::union_jack;
  if (name == "right") return MeshPattern::right;
  if (name == "left") return MeshPattern::left;
  throw InvalidArgument("unknown mesh pattern '" + std::string(name) + "'");
}

std::string_view to_string(MeshPattern pattern) {
  switch (pattern) {
    case MeshPattern::union_jack: return "union_jack";
    case MeshPattern::right: return "right";
    case MeshPattern::left: return "left";
  }
  return "?";
}

Index Mesh::check_cell(Index c) const {
  if (c < 0 || c >= num_cells())
    throw InvalidArgument("cell index " + std::to_string(c) + " out of range");
  return c;
}

Index Mesh::check_edge(Index e) const {
  if (e < 0 || e >= num_edges())
    throw InvalidArgument("edge index " + std::to_string(e) + " out of range");
  return e;
}

std::array<Vec2, 3> Mesh::cell_vertices(Index c) const {
  const auto& v = cells_[check_cell(c)];
  return {vertices_[v[0]], vertices_[v[1]], vertices_[v[2]]};
}

double Mesh::cell_area(Index c) const {
  const auto p = cell_vertices(c);
  const Vec2 a = p[1] - p[0];
  const Vec2 b = p[2] - p[0];
  return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

double Mesh::cell_diameter(Index c) const {
  const auto p = cell_vertices(c);
  return std::max({(p[1] - p[0]).norm(), (p[2] - p[1]).norm(), (p[0] - p[2]).norm()});
}

std::array<Vec2, 2> Mesh::edge_endpoints_in_cell(Index e, Index c) const {
  check_edge(e);
  const auto& ce = cell_edges(c);
  for (int i = 0; i < 3; ++i) {
    if (ce[i].edge != e) continue;
    const auto& v = cells_[c];
    const Index a = v[(i + 1) % 3];
    const Index b = v[(i + 2) % 3];
    if (topo_[a] < topo_[b]) return {vertices_[a], vertices_[b]};
    return {vertices_[b], vertices_[a]};
  }
  throw InvalidArgument("edge " + std::to_string(e) + " is not an edge of cell " +
                        std::to_string(c));
}

EdgeGeometry Mesh::edge_geometry(Index e) const {
  const auto ends = edge_endpoints_in_cell(e, edge_cells_[check_edge(e)][0]);
  const Vec2 tangent = ends[1] - ends[0];
  const double length = tangent.norm();
  return {Vec2(tangent.y(), -tangent.x()) / length, length, 0.5 * (ends[0] + ends[1])};
}

Mesh build_unit_square_mesh(int cells_per_side, MeshPattern pattern, bool periodic_x) {
  const int n = cells_per_side;
  if (n < 1) throw InvalidArgument("cells_per_side must be at least 1");
  if (periodic_x && n < 3)
    throw InvalidArgument("a periodic mesh needs at least 3 cells per side");
  // Global systems hold up to ~8 unknowns per square; keep them addressable.
  const auto squares = static_cast<long long>(n) * n;
  if (squares > std::numeric_limits<Index>::max() / 16)
    throw InvalidArgument("cells_per_side too large for the index type");

  Mesh mesh;
  mesh.cells_per_side_ = n;
  mesh.pattern_ = pattern;
  mesh.periodic_x_ = periodic_x;

  const Index stride = n + 1;
  const auto vid = [stride](int i, int j) { return static_cast<Index>(j * stride + i); };

  mesh.vertices_.reserve(static_cast<std::size_t>(stride) * stride);
  mesh.topo_.reserve(mesh.vertices_.capacity());
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.vertices_.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
      mesh.topo_.push_back(periodic_x && i == n ? vid(0, j) : vid(i, j));
    }
  }
  mesh.num_topo_vertices_ = periodic_x ? n * stride : stride * stride;

  mesh.cells_.reserve(2 * static_cast<std::size_t>(squares));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Index v00 = vid(i, j), v10 = vid(i + 1, j);
      const Index v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      bool slash = true;
      switch (pattern) {
        case MeshPattern::union_jack: slash = (i + j) % 2 == 0; break;
        case MeshPattern::right: slash = true; break;
        case MeshPattern::left: slash = false; break;
      }
      if (slash) {
        mesh.cells_.push_back({v00, v10, v11});
        mesh.cells_.push_back({v00, v11, v01});
      } else {
        mesh.cells_.push_back({v00, v10, v01});
        mesh.cells_.push_back({v10, v11, v01});
      }
    }
  }

  std::map<std::pair<Index, Index>, Index> edge_ids;
  mesh.cell_edges_.resize(mesh.cells_.size());
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto& v = mesh.cells_[c];
    for (int i = 0; i < 3; ++i) {
      const Index a = mesh.topo_[v[(i + 1) % 3]];
      const Index b = mesh.topo_[v[(i + 2) % 3]];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_ids.try_emplace({key.first, key.second}, mesh.num_edges());
      if (inserted) {
        mesh.edges_.push_back({key.first, key.second});
        mesh.edge_cells_.push_back({c, -1});
        mesh.edge_local_.push_back({i, -1});
      } else {
        auto& adj = mesh.edge_cells_[it->second];
        if (adj[1] >= 0)
          throw GeometryError("edge shared by more than two cells");
        adj[1] = c;
        mesh.edge_local_[it->second][1] = i;
      }
      mesh.cell_edges_[c][i] = {it->second, a < b ? 1 : -1};
    }
  }

  for (Index c = 0; c < mesh.num_cells(); ++c)
    mesh.h_max_ = std::max(mesh.h_max_, mesh.cell_diameter(c));
  return mesh;
}

void write_mesh_text(const Mesh& mesh, std::ostream& out) {
  const auto precision = out.precision(17);
  for (const auto& p : mesh.vertices()) out << "vertex " << p.x() << ' ' << p.y() << '\n';
  for (const auto& c : mesh.cells()) out << "cell " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const auto& v = mesh.edges()[e];
    out << "edge " << v[0] << ' ' << v[1] << ' ' << (mesh.is_boundary(e) ? 1 : 0) << '\n';
  }
  out.precision(precision);
}

}  // namespace hdivflow
