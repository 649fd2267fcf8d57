#include "cd2/geometry.hpp"

#include <cmath>
#include <string>

#include "cd2/error.hpp"

namespace cd2 {

PointSet::PointSet(int dim) : dim_(dim) {
    if (dim != 2 && dim != 3) {
        throw InputError("point dimension must be 2 or 3, got " + std::to_string(dim));
    }
}

PointSet::PointSet(std::vector<Vec3> points, int dim) : PointSet(dim) {
    for (const auto& p : points) {
        check(p);
    }
    points_ = std::move(points);
}

PointSet::PointSet(std::initializer_list<Vec3> points, int dim)
    : PointSet(std::vector<Vec3>(points), dim) {}

PointSet PointSet::from_xy(std::span<const std::array<double, 2>> xy) {
    PointSet out(2);
    out.points_.reserve(xy.size());
    for (const auto& p : xy) {
        out.push_back(Vec3(p[0], p[1], 0.0));
    }
    return out;
}

void PointSet::check(const Vec3& p) const {
    if (!p.allFinite()) {
        throw InputError("non-finite point coordinate");
    }
    if (dim_ == 2 && p.z() != 0.0) {
        throw InputError("2D point with non-zero z coordinate");
    }
}

void PointSet::push_back(const Vec3& p) {
    check(p);
    points_.push_back(p);
}

void PointSet::set(std::size_t i, const Vec3& p) {
    check(p);
    points_.at(i) = p;
}

PointSet PointSet::without(std::span<const bool> drop) const {
    if (drop.size() != points_.size()) {
        throw InputError("drop mask has " + std::to_string(drop.size()) + " entries for " +
                         std::to_string(points_.size()) + " points");
    }
    PointSet out(dim_);
    out.points_.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!drop[i]) {
            out.points_.push_back(points_[i]);
        }
    }
    return out;
}

PointSet PointSet::subset(std::span<const Index> indices) const {
    PointSet out(dim_);
    out.points_.reserve(indices.size());
    for (Index i : indices) {
        if (i >= points_.size()) throw InputError("point index " + std::to_string(i) + " out of range");
        out.points_.push_back(points_[i]);
    }
    return out;
}

Vec3 PointSet::centroid() const {
    Vec3 c = Vec3::Zero();
    for (const auto& p : points_) {
        c += p;
    }
    return points_.empty() ? c : Vec3(c / static_cast<double>(points_.size()));
}

void Mesh::validate() const {
    const auto n = vertices.size();
    auto bad = [](std::size_t f, const std::string& why) {
        return InputError("face " + std::to_string(f) + ": " + why);
    };
    if (dim() == 3) {
        if (!segments.empty()) {
            throw InputError("3D mesh must not contain edge segments");
        }
        for (std::size_t f = 0; f < triangles.size(); ++f) {
            const auto& t = triangles[f];
            for (Index v : t) {
                if (v >= n) throw bad(f, "vertex index " + std::to_string(v) + " out of range");
            }
            if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) throw bad(f, "repeated vertex index");
        }
    } else {
        if (!triangles.empty()) {
            throw InputError("2D mesh must contain edge segments, not triangles");
        }
        for (std::size_t f = 0; f < segments.size(); ++f) {
            const auto& s = segments[f];
            for (Index v : s) {
                if (v >= n) throw bad(f, "vertex index " + std::to_string(v) + " out of range");
            }
            if (s[0] == s[1]) throw bad(f, "repeated vertex index");
        }
    }
}

}  // namespace cd2
