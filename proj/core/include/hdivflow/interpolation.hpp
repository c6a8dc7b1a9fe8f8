#pragma once

#include <memory>

#include "hdivflow/fe_space.hpp"
#include "hdivflow/quadrature.hpp"
#include "hdivflow/types.hpp"

namespace hdivflow {

/// Raviart-Thomas interpolant: matches the edge moments of v.n against
/// P_k(e) and, for k >= 1, the interior moments against P_{k-1}(T)^2.
/// Both are evaluated with the configured quadrature. Edges whose DOFs are
/// removed (wall, constrained space) are left at zero.
/// Throws InvalidArgument unless the space is RT.
DiscreteField rt_interpolate(std::shared_ptr<const FeSpace> space, const VectorField& field,
                             const QuadratureConfig& quad);

/// Cellwise L2 projection onto a discontinuous P_l space.
DiscreteField l2_project(std::shared_ptr<const FeSpace> space, const ScalarField& field,
                         const QuadratureConfig& quad);

}  // namespace hdivflow
