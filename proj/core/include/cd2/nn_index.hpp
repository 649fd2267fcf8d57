#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "cd2/geometry.hpp"

namespace cd2 {

struct Neighbor {
    Index index = 0;
    double sq_dist = std::numeric_limits<double>::infinity();
};

/// Static k-d tree over one PointSet.
///
/// Queries return exactly what an exhaustive scan would: the minimum squared
/// distance, ties broken by the lowest point index. The tree keeps its own
/// copy of the coordinates and is read-only after construction, so one
/// instance can be shared between threads.
class NnIndex {
public:
    /// Throws InputError("empty point set") for an empty input.
    explicit NnIndex(const PointSet& points);

    std::size_t size() const noexcept { return points_.size(); }

    Neighbor nearest(const Vec3& query) const;
    /// Nearest point other than the one at index `skip`. Requires size() >= 2.
    Neighbor nearest_excluding(const Vec3& query, Index skip) const;

private:
    struct Node {
        // Leaves: [begin, end) into order_. Inner nodes: children + split plane.
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        int axis = 0;
        double split = 0.0;
    };

    std::int32_t build(std::uint32_t begin, std::uint32_t end, int dims);
    void search(std::int32_t node, const Vec3& q, Index skip, Neighbor& best) const;

    std::vector<Vec3> points_;
    std::vector<Index> order_;
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

/// The four lists of a bidirectional nearest-neighbor query between the
/// ground-truth set S1 and the vertex set S2.
///
/// dist1[j] / index1[j]: squared distance from S1[j] to its nearest vertex
/// S2[index1[j]]. dist2[i] / index2[i]: squared distance from S2[i] to its
/// nearest point S1[index2[i]].
struct NnTables {
    std::vector<double> dist1;
    std::vector<Index> index1;
    std::vector<double> dist2;
    std::vector<Index> index2;

    friend bool operator==(const NnTables&, const NnTables&) = default;
};

NnTables nn_tables(const PointSet& s1, const PointSet& s2);

/// Mean over points of the (unsquared) Euclidean distance to the nearest
/// other point of the same set. Requires at least two points.
double mean_nn_distance(const PointSet& s);

}  // namespace cd2
