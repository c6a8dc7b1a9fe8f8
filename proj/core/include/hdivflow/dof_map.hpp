#pragma once

#include <span>
#include <vector>

#include "hdivflow/mesh.hpp"
#include "hdivflow/reference_element.hpp"

namespace hdivflow {

/// Treatment of the normal trace on the wall for H(div) spaces.
enum class NormalTrace {
  constrained,  ///< v.n = 0 on the boundary: boundary edge DOFs are removed
  free,         ///< all edge DOFs kept (full H(div) space)
};

/// Cell-to-global numbering with orientation signs.
///
/// Edge DOFs are numbered first, edge by edge with k+1 consecutive moments,
/// then the interior DOFs cell by cell. Removed DOFs map to kNoDof. The sign
/// of moment j seen from a cell with edge sign s is s^(j+1): the normal flips
/// with the cell orientation and the Legendre weight flips for odd j.
struct DofMap {
  SpaceSpec spec;
  Index n_global = 0;
  int dofs_per_cell = 0;
  std::vector<Index> cell_to_global;
  std::vector<signed char> orientation_sign;

  std::span<const Index> dofs(Index cell) const {
    return {cell_to_global.data() + static_cast<std::size_t>(cell) * dofs_per_cell,
            static_cast<std::size_t>(dofs_per_cell)};
  }
  std::span<const signed char> signs(Index cell) const {
    return {orientation_sign.data() + static_cast<std::size_t>(cell) * dofs_per_cell,
            static_cast<std::size_t>(dofs_per_cell)};
  }
};

DofMap build_dof_map(const Mesh& mesh, const SpaceSpec& spec,
                     NormalTrace trace = NormalTrace::constrained);

}  // namespace hdivflow
