#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "hdivflow/types.hpp"

namespace hdivflow {

/// How each square of the structured grid is cut into two triangles.
enum class MeshPattern {
  union_jack,  ///< checkerboard: "/" when i+j is even, "\" otherwise
  right,       ///< every square cut along "/"
  left,        ///< every square cut along "\"
};

MeshPattern parse_mesh_pattern(std::string_view name);
std::string_view to_string(MeshPattern pattern);

/// Edge of a cell, stored opposite the cell's local vertex with the same
/// position. `sign` is +1 when the cell's outward normal coincides with the
/// edge's global normal and -1 otherwise.
struct CellEdge {
  Index edge;
  int sign;
};

struct EdgeGeometry {
  Vec2 normal;  ///< global unit normal
  double length;
  Vec2 midpoint;
};

/// Structured triangulation of the unit square.
///
/// Cells are counter-clockwise vertex triples. Local edge i of a cell joins
/// local vertices (i+1)%3 and (i+2)%3. Edges store their two topological
/// vertex ids with the lower id first; the global edge normal is the tangent
/// from the lower to the higher vertex rotated clockwise by 90 degrees.
///
/// With `periodic_x` the vertical sides x=0 and x=1 are identified: vertices
/// keep their geometric position, but edges are keyed on topological ids so
/// the seam edges become interior. Geometry is always evaluated through the
/// cell's own vertices.
class Mesh {
 public:
  Index num_vertices() const noexcept { return static_cast<Index>(vertices_.size()); }
  Index num_cells() const noexcept { return static_cast<Index>(cells_.size()); }
  Index num_edges() const noexcept { return static_cast<Index>(edges_.size()); }

  /// Number of distinct vertices after periodic identification.
  Index num_topological_vertices() const noexcept { return num_topo_vertices_; }

  const std::vector<Vec2>& vertices() const noexcept { return vertices_; }
  const std::vector<std::array<Index, 3>>& cells() const noexcept { return cells_; }
  const std::vector<std::array<Index, 2>>& edges() const noexcept { return edges_; }

  const std::array<Index, 3>& cell(Index c) const { return cells_[check_cell(c)]; }
  const std::array<CellEdge, 3>& cell_edges(Index c) const { return cell_edges_[check_cell(c)]; }
  std::array<Vec2, 3> cell_vertices(Index c) const;

  /// Adjacent cells of an edge; the second entry is -1 on the boundary.
  const std::array<Index, 2>& edge_cells(Index e) const { return edge_cells_[check_edge(e)]; }
  /// Local edge position of `e` inside each of its adjacent cells.
  const std::array<int, 2>& edge_local_index(Index e) const { return edge_local_[check_edge(e)]; }
  bool is_boundary(Index e) const { return edge_cells_[check_edge(e)][1] < 0; }

  Index topological_vertex(Index v) const { return topo_[v]; }

  double h_max() const noexcept { return h_max_; }
  int cells_per_side() const noexcept { return cells_per_side_; }
  MeshPattern pattern() const noexcept { return pattern_; }
  bool periodic_x() const noexcept { return periodic_x_; }

  double cell_area(Index c) const;
  double cell_diameter(Index c) const;

  /// Throws InvalidArgument for an out-of-range index.
  EdgeGeometry edge_geometry(Index e) const;

  /// Endpoints of edge `e` as seen from cell `c`, ordered lower id first.
  std::array<Vec2, 2> edge_endpoints_in_cell(Index e, Index c) const;

  friend Mesh build_unit_square_mesh(int cells_per_side, MeshPattern pattern,
                                     bool periodic_x);

 private:
  Index check_cell(Index c) const;
  Index check_edge(Index e) const;

  std::vector<Vec2> vertices_;
  std::vector<Index> topo_;
  std::vector<std::array<Index, 3>> cells_;
  std::vector<std::array<Index, 2>> edges_;
  std::vector<std::array<CellEdge, 3>> cell_edges_;
  std::vector<std::array<Index, 2>> edge_cells_;
  std::vector<std::array<int, 2>> edge_local_;
  Index num_topo_vertices_ = 0;
  double h_max_ = 0.0;
  int cells_per_side_ = 0;
  MeshPattern pattern_ = MeshPattern::union_jack;
  bool periodic_x_ = false;
};

/// Builds an N x N grid of squares, each cut into two triangles.
/// Throws InvalidArgument for N < 1 (N < 3 when periodic) or when the
/// entity counts would overflow Index.
Mesh build_unit_square_mesh(int cells_per_side, MeshPattern pattern = MeshPattern::union_jack,
                            bool periodic_x = false);

/// Plain-text dump: `vertex x y`, `cell v0 v1 v2`, `edge v0 v1 b` lines.
void write_mesh_text(const Mesh& mesh, std::ostream& out);

}  // namespace hdivflow
