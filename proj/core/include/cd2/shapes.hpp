#pragma once

#include <cstdint>
#include <utility>

#include "cd2/geometry.hpp"

namespace cd2 {

/// Unit-radius icosphere built by repeated 1-to-4 midpoint subdivision of an
/// icosahedron. Level k has 10*4^k + 2 vertices and 20*4^k faces; level 4
/// is the common 2562-vertex deformation template. Valid levels: 0..6.
Mesh make_icosphere(int subdivisions);

/// Closed loop of `n` vertices on a circle in the z = 0 plane, with `n`
/// edge segments (i, i+1 mod n).
Mesh make_circle_loop(const Vec3& center, double radius, std::size_t n);

/// Side-profile chair used by the 2D deformation demo.
struct Chair2d {
    PointSet ground_truth;  ///< 81 points traced along the chair outline
    Mesh template_mesh;     ///< 80-vertex circle loop around the chair
};

/// The chair is a closed outline with seat top at y = 0.4, the outer edge
/// of the back along x = -0.45 and both legs reaching y = -0.5; parts are
/// 0.2 thick. The template is a radius-0.8 loop centered at the centroid of
/// the ground-truth points.
Chair2d make_chair_2d();

/// Axis-aligned box surface (12 triangles) spanning [lo, hi].
Mesh make_box(const Vec3& lo, const Vec3& hi);

/// Draws `n` points uniformly by area from a 3D triangle mesh: a face is
/// picked with probability proportional to its area, then a point uniformly
/// inside it. Deterministic for a given seed.
PointSet sample_surface(const Mesh& mesh, std::size_t n, std::uint64_t seed);

/// `n` points uniform on the unit sphere (normalized Gaussian samples).
PointSet sample_unit_sphere(std::size_t n, std::uint64_t seed);

}  // namespace cd2
