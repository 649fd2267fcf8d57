#pragma once

#include <array>

#include "cd2/geometry.hpp"

namespace cd2 {

using Tri3 = std::array<Vec3, 3>;

/// Orientation determinants with magnitude below this are treated as zero
/// (coplanar / collinear).
inline constexpr double kOrientEps = 1e-12;

/// Signed volume (a - d) . ((b - d) x (c - d)).
double orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);
/// Signed area (b - a) x (c - a) in the xy-plane.
double orient2d(const Vec3& a, const Vec3& b, const Vec3& c);

/// True iff the closed triangles share at least one point. Touching at a
/// vertex or along an edge counts. Coplanar pairs fall back to a 2D overlap
/// test; zero-area triangles are handled as segments or points.
bool tri_tri_intersect(const Tri3& a, const Tri3& b);

/// True iff the 2D segments cross properly: each segment's endpoints lie
/// strictly on opposite sides of the other's supporting line. Touching and
/// collinear overlap do not count.
bool segments_cross_2d(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1);

}  // namespace cd2
