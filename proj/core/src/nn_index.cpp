#include "cd2/nn_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cd2/error.hpp"

namespace cd2 {

namespace {

constexpr std::uint32_t kLeafSize = 8;

void require_compatible(const PointSet& s1, const PointSet& s2) {
    if (s1.empty() || s2.empty()) {
        throw InputError("empty point set");
    }
    if (s1.dim() != s2.dim()) {
        throw InputError("dimension mismatch: " + std::to_string(s1.dim()) + " vs " +
                         std::to_string(s2.dim()));
    }
}

inline bool better(double d, Index i, const Neighbor& best) {
    return d < best.sq_dist || (d == best.sq_dist && i < best.index);
}

}  // namespace

NnIndex::NnIndex(const PointSet& points) {
    if (points.empty()) {
        throw InputError("empty point set");
    }
    points_.assign(points.points().begin(), points.points().end());
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), Index{0});
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    root_ = build(0, static_cast<std::uint32_t>(points_.size()), points.dim());
}

std::int32_t NnIndex::build(std::uint32_t begin, std::uint32_t end, int dims) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{begin, end});
    if (end - begin <= kLeafSize) {
        return id;
    }

    Vec3 lo = points_[order_[begin]];
    Vec3 hi = lo;
    for (auto k = begin + 1; k < end; ++k) {
        lo = lo.cwiseMin(points_[order_[k]]);
        hi = hi.cwiseMax(points_[order_[k]]);
    }
    int axis = 0;
    (hi - lo).head(dims).maxCoeff(&axis);
    if (hi[axis] == lo[axis]) {
        // All points coincide; keep them in one (oversized) leaf.
        return id;
    }

    const auto mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](Index a, Index b) { return points_[a][axis] < points_[b][axis]; });
    const double split = points_[order_[mid]][axis];

    const auto left = build(begin, mid, dims);
    const auto right = build(mid, end, dims);
    auto& node = nodes_[id];
    node.left = left;
    node.right = right;
    node.axis = axis;
    node.split = split;
    return id;
}

void NnIndex::search(std::int32_t node_id, const Vec3& q, Index skip, Neighbor& best) const {
    const Node& node = nodes_[node_id];
    if (node.left < 0) {
        for (auto k = node.begin; k < node.end; ++k) {
            const Index i = order_[k];
            if (i == skip) continue;
            const double d = squared_distance(q, points_[i]);
            if (better(d, i, best)) {
                best = {i, d};
            }
        }
        return;
    }
    // Left holds coordinates <= split, right holds coordinates >= split.
    const double diff = q[node.axis] - node.split;
    const auto near = diff <= 0.0 ? node.left : node.right;
    const auto far = diff <= 0.0 ? node.right : node.left;
    search(near, q, skip, best);
    // Non-strict so that equidistant points with lower index are still seen.
    if (diff * diff <= best.sq_dist) {
        search(far, q, skip, best);
    }
}

Neighbor NnIndex::nearest(const Vec3& query) const {
    Neighbor best;
    search(root_, query, std::numeric_limits<Index>::max(), best);
    return best;
}

Neighbor NnIndex::nearest_excluding(const Vec3& query, Index skip) const {
    if (points_.size() < 2) {
        throw InputError("nearest_excluding needs at least two points");
    }
    Neighbor best;
    search(root_, query, skip, best);
    return best;
}

NnTables nn_tables(const PointSet& s1, const PointSet& s2) {
    require_compatible(s1, s2);
    NnTables t;
    t.dist1.resize(s1.size());
    t.index1.resize(s1.size());
    t.dist2.resize(s2.size());
    t.index2.resize(s2.size());

    const NnIndex over_s2(s2);
    for (std::size_t j = 0; j < s1.size(); ++j) {
        const auto nb = over_s2.nearest(s1[j]);
        t.dist1[j] = nb.sq_dist;
        t.index1[j] = nb.index;
    }
    const NnIndex over_s1(s1);
    for (std::size_t i = 0; i < s2.size(); ++i) {
        const auto nb = over_s1.nearest(s2[i]);
        t.dist2[i] = nb.sq_dist;
        t.index2[i] = nb.index;
    }
    return t;
}

double mean_nn_distance(const PointSet& s) {
    if (s.size() < 2) {
        throw InputError("mean nearest-neighbor distance needs at least two points");
    }
    const NnIndex index(s);
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        sum += std::sqrt(index.nearest_excluding(s[i], static_cast<Index>(i)).sq_dist);
    }
    return sum / static_cast<double>(s.size());
}

}  // namespace cd2
