#include "cd2/quality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cd2/emd.hpp"
#include "cd2/error.hpp"
#include "cd2/intersect.hpp"
#include "cd2/nn_index.hpp"

namespace cd2 {

// ---------------------------------------------------------------------------
// Vertices clustering

VcReport vc_metrics(const PointSet& s2, const PointSet& s1, double rho) {
    if (s1.size() < 2) {
        throw InputError("VC metrics need at least two ground-truth points");
    }
    return vc_metrics(s2, s1, rho, mean_nn_distance(s1));
}

VcReport vc_metrics(const PointSet& s2, const PointSet& s1, double rho, double mean_nn_s1) {
    if (s2.size() < 2 || s1.size() < 2) {
        throw InputError("VC metrics need at least two vertices and two ground-truth points");
    }
    if (s1.dim() != s2.dim()) {
        throw InputError("dimension mismatch");
    }
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw InputError("rho must be positive");
    }
    VcReport r;
    r.rho = rho;
    r.sigma_vc = rho * mean_nn_s1;

    const NnIndex vertices(s2);
    const NnIndex points(s1);
    std::vector<Index> phi(s2.size());
    for (std::size_t i = 0; i < s2.size(); ++i) {
        phi[i] = points.nearest(s2[i]).index;
    }
    for (std::size_t i = 0; i < s2.size(); ++i) {
        const auto nb = vertices.nearest_excluding(s2[i], static_cast<Index>(i));
        if (std::sqrt(nb.sq_dist) < r.sigma_vc) {
            r.vc_vertices.push_back(static_cast<Index>(i));
            if (phi[i] == phi[nb.index]) {
                r.vc_prime_vertices.push_back(static_cast<Index>(i));
            }
        }
    }
    r.n_vc = r.vc_vertices.size();
    r.n_vc_prime = r.vc_prime_vertices.size();
    return r;
}

// ---------------------------------------------------------------------------
// Illegal twist

namespace {

struct Box {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

    void grow(const Vec3& p) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    void grow(const Box& b) {
        lo = lo.cwiseMin(b.lo);
        hi = hi.cwiseMax(b.hi);
    }
    bool overlaps(const Box& b) const {
        return (lo.array() <= b.hi.array() + kOrientEps).all() &&
               (b.lo.array() <= hi.array() + kOrientEps).all();
    }
};

class FaceBvh {
public:
    explicit FaceBvh(std::vector<Box> boxes) : boxes_(std::move(boxes)) {
        order_.resize(boxes_.size());
        std::iota(order_.begin(), order_.end(), Index{0});
        if (!boxes_.empty()) build(0, static_cast<Index>(boxes_.size()));
    }

    template <typename Fn>
    void query(const Box& q, Fn&& visit) const {
        if (nodes_.empty()) return;
        std::vector<std::int32_t> stack{0};
        while (!stack.empty()) {
            const Node& n = nodes_[stack.back()];
            stack.pop_back();
            if (!n.box.overlaps(q)) continue;
            if (n.left < 0) {
                for (auto k = n.begin; k < n.end; ++k) {
                    if (boxes_[order_[k]].overlaps(q)) visit(order_[k]);
                }
            } else {
                stack.push_back(n.left);
                stack.push_back(n.right);
            }
        }
    }

private:
    struct Node {
        Box box;
        Index begin = 0;
        Index end = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
    };

    std::int32_t build(Index begin, Index end) {
        const auto id = static_cast<std::int32_t>(nodes_.size());
        Box box;
        Box centers;
        for (auto k = begin; k < end; ++k) {
            box.grow(boxes_[order_[k]]);
            centers.grow(center(order_[k]));
        }
        nodes_.push_back(Node{box, begin, end});
        if (end - begin <= 4) return id;
        int axis = 0;
        (centers.hi - centers.lo).maxCoeff(&axis);
        const Index mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](Index a, Index b) { return center(a)[axis] < center(b)[axis]; });
        const auto left = build(begin, mid);
        const auto right = build(mid, end);
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    Vec3 center(Index f) const { return 0.5 * (boxes_[f].lo + boxes_[f].hi); }

    std::vector<Box> boxes_;
    std::vector<Index> order_;
    std::vector<Node> nodes_;
};

template <std::size_t N>
bool share_vertex(const std::array<Index, N>& a, const std::array<Index, N>& b) {
    for (Index x : a) {
        for (Index y : b) {
            if (x == y) return true;
        }
    }
    return false;
}

template <std::size_t N, typename Test>
ItReport find_twists(const Mesh& mesh, const std::vector<std::array<Index, N>>& faces, Test&& test) {
    const auto& v = mesh.vertices;
    std::vector<Box> boxes(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
        for (Index i : faces[f]) boxes[f].grow(v[i]);
    }
    std::vector<char> flagged(faces.size(), 0);
    const FaceBvh bvh(boxes);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        bvh.query(boxes[f], [&](Index g) {
            if (g <= f) return;
            if (share_vertex(faces[f], faces[g])) return;
            if (test(faces[f], faces[g])) {
                flagged[f] = 1;
                flagged[g] = 1;
            }
        });
    }

    ItReport r;
    std::vector<char> vertex_hit(v.size(), 0);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        if (!flagged[f]) continue;
        r.it_faces.push_back(static_cast<Index>(f));
        for (Index i : faces[f]) vertex_hit[i] = 1;
    }
    r.f_it = r.it_faces.size();
    r.v_it = static_cast<std::size_t>(std::count(vertex_hit.begin(), vertex_hit.end(), 1));
    return r;
}

}  // namespace

ItReport it_metrics(const Mesh& mesh) {
    mesh.validate();
    const auto& v = mesh.vertices;
    if (mesh.dim() == 3) {
        return find_twists(mesh, mesh.triangles, [&](const Triangle& a, const Triangle& b) {
            return tri_tri_intersect({v[a[0]], v[a[1]], v[a[2]]}, {v[b[0]], v[b[1]], v[b[2]]});
        });
    }
    return find_twists(mesh, mesh.segments, [&](const Segment& a, const Segment& b) {
        return segments_cross_2d(v[a[0]], v[a[1]], v[b[0]], v[b[1]]);
    });
}

// ---------------------------------------------------------------------------
// DPVI

const std::array<std::string, DpviHistogram::kBins>& DpviHistogram::labels() {
    static const std::array<std::string, kBins> names{"0",     "1",     "2",     "3-10", "11-20",
                                                      "21-30", "31-40", "41-50", "51-max"};
    return names;
}

std::size_t DpviHistogram::bin_of(std::size_t cardinality) {
    std::size_t bin = 0;
    while (bin + 1 < kBins && cardinality >= lower_edges[bin + 1]) ++bin;
    return bin;
}

DpviHistogram dpvi_histogram(const MappingStats& stats) {
    DpviHistogram h;
    h.raw.reserve(stats.p_of_v.size());
    for (const auto& points : stats.p_of_v) {
        h.raw.push_back(points.size());
        ++h.counts[DpviHistogram::bin_of(points.size())];
    }
    return h;
}

// ---------------------------------------------------------------------------
// OPTA

OptaResult opta_baseline(const PointSet& s1, std::size_t k, std::uint64_t seed, std::size_t trials,
                         const OptaOptions& opts) {
    if (k == 0) throw InputError("OPTA subsample size must be positive");
    if (k > s1.size()) {
        throw InputError("OPTA subsample size " + std::to_string(k) + " exceeds ground truth size " +
                         std::to_string(s1.size()));
    }
    if (trials == 0) throw InputError("OPTA needs at least one trial");
    if (opts.dpvi_eval_points == 0 || opts.emd_points == 0) {
        throw InputError("OPTA sample sizes must be positive");
    }

    OptaResult out;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = seed + 0x9e3779b97f4a7c15ULL * (t + 1);
        // Draw k pseudo-vertices; the rest of the permutation is held-out ground truth.
        const auto order = sample_indices(s1.size(), s1.size(), trial_seed);
        const std::span<const Index> picked(order.data(), k);
        const PointSet pseudo = s1.subset(picked);

        out.cd += chamfer(s1, pseudo).total;
        out.emd += emd_subsampled(s1, pseudo, std::min(k, opts.emd_points), trial_seed);

        PointSet eval = s1;
        if (k < s1.size()) {
            const auto m = std::min(opts.dpvi_eval_points, s1.size() - k);
            eval = s1.subset(std::span<const Index>(order.data() + k, m));
        }
        const auto tables = nn_tables(eval, pseudo);
        const auto hist = dpvi_histogram(mapping_stats(tables, eval.size(), pseudo.size()));
        for (std::size_t b = 0; b < DpviHistogram::kBins; ++b) {
            out.dpvi[b] += static_cast<double>(hist.counts[b]);
        }
    }
    const auto n = static_cast<double>(trials);
    out.cd /= n;
    out.emd /= n;
    for (auto& c : out.dpvi) c /= n;
    return out;
}

}  // namespace cd2
