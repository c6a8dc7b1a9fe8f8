#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Core>

namespace hdivflow {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Index type for vertices, edges, cells and degrees of freedom.
using Index = std::int32_t;

/// Marks a local degree of freedom that is eliminated from the global system.
inline constexpr Index kNoDof = -1;

using VectorField = std::function<Vec2(const Vec2&)>;
using ScalarField = std::function<double(const Vec2&)>;

}  // namespace hdivflow
