#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace cd2 {

using Vec3 = Eigen::Vector3d;
using Index = std::uint32_t;

/// Ordered collection of 2D or 3D points.
///
/// Points are always stored as 3-vectors. A 2D set keeps z == 0 for every
/// point, so distances and gradients computed in 3D are exact for 2D data.
class PointSet {
public:
    explicit PointSet(int dim = 3);
    PointSet(std::vector<Vec3> points, int dim);
    PointSet(std::initializer_list<Vec3> points, int dim = 3);

    /// Builds a 2D set from (x, y) pairs.
    static PointSet from_xy(std::span<const std::array<double, 2>> xy);

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

    const Vec3& operator[](std::size_t i) const { return points_[i]; }
    std::span<const Vec3> points() const noexcept { return points_; }

    void push_back(const Vec3& p);
    /// Overwrites point i; validates the new coordinates.
    void set(std::size_t i, const Vec3& p);

    /// Copy containing only the points whose index is not flagged in `drop`.
    PointSet without(std::span<const bool> drop) const;
    /// Copy containing the points at `indices`, in that order.
    PointSet subset(std::span<const Index> indices) const;

    Vec3 centroid() const;

    friend bool operator==(const PointSet& a, const PointSet& b) {
        return a.dim_ == b.dim_ && a.points_ == b.points_;
    }

private:
    void check(const Vec3& p) const;

    int dim_;
    std::vector<Vec3> points_;
};

using Triangle = std::array<Index, 3>;
using Segment = std::array<Index, 2>;

/// Deformable template: vertices plus connectivity. 3D meshes use
/// triangles, 2D meshes use edge segments; the other list stays empty.
struct Mesh {
    PointSet vertices{3};
    std::vector<Triangle> triangles;
    std::vector<Segment> segments;

    int dim() const noexcept { return vertices.dim(); }
    std::size_t face_count() const noexcept {
        return dim() == 3 ? triangles.size() : segments.size();
    }

    /// Throws InputError if any face references a missing vertex, repeats a
    /// vertex, or uses the wrong arity for the dimension.
    void validate() const;

    friend bool operator==(const Mesh&, const Mesh&) = default;
};

inline double squared_distance(const Vec3& a, const Vec3& b) {
    return (a - b).squaredNorm();
}

}  // namespace cd2
