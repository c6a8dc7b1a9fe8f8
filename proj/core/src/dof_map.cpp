#include "hdivflow/dof_map.hpp"

namespace hdivflow {

DofMap build_dof_map(const Mesh& mesh, const SpaceSpec& spec, NormalTrace trace) {
  spec.validate();
  DofMap map;
  map.spec = spec;
  map.dofs_per_cell = spec.dofs_per_cell();
  const auto total = static_cast<std::size_t>(mesh.num_cells()) * map.dofs_per_cell;
  map.cell_to_global.assign(total, kNoDof);
  map.orientation_sign.assign(total, 1);

  if (!spec.is_vector()) {
    for (std::size_t i = 0; i < total; ++i) map.cell_to_global[i] = static_cast<Index>(i);
    map.n_global = static_cast<Index>(total);
    return map;
  }

  const int per_edge = spec.dofs_per_edge();
  std::vector<Index> edge_offset(mesh.num_edges(), kNoDof);
  Index next = 0;
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (trace == NormalTrace::constrained && mesh.is_boundary(e)) continue;
    edge_offset[e] = next;
    next += per_edge;
  }

  const int interior = spec.dofs_per_cell_interior();
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto base = static_cast<std::size_t>(c) * map.dofs_per_cell;
    const auto& edges = mesh.cell_edges(c);
    for (int i = 0; i < 3; ++i) {
      const Index offset = edge_offset[edges[i].edge];
      for (int j = 0; j < per_edge; ++j) {
        const auto local = base + i * per_edge + j;
        map.orientation_sign[local] =
            static_cast<signed char>((j % 2 == 0) ? edges[i].sign : 1);
        if (offset != kNoDof) map.cell_to_global[local] = offset + j;
      }
    }
    for (int j = 0; j < interior; ++j)
      map.cell_to_global[base + 3 * per_edge + j] = next++;
  }
  map.n_global = next;
  return map;
}

}  // namespace hdivflow
