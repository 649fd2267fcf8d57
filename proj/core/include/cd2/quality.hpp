#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cd2/chamfer.hpp"
#include "cd2/geometry.hpp"

namespace cd2 {

/// Vertices-clustering report.
///
/// A vertex is in S_VC when its nearest other vertex lies closer than
/// sigma_vc = rho * mean_nn_distance(S1). It is additionally in S_VC' when
/// that nearest vertex shares its nearest ground-truth point.
struct VcReport {
    std::size_t n_vc = 0;
    std::size_t n_vc_prime = 0;
    std::vector<Index> vc_vertices;        ///< sorted
    std::vector<Index> vc_prime_vertices;  ///< sorted, subset of vc_vertices
    double sigma_vc = 0.0;
    double rho = 0.0;
};

VcReport vc_metrics(const PointSet& s2, const PointSet& s1, double rho);
/// Variant taking a precomputed mean nearest-neighbor distance of S1.
VcReport vc_metrics(const PointSet& s2, const PointSet& s1, double rho, double mean_nn_s1);

/// Illegal-twist report: faces that intersect some other face they share no
/// vertex with.
struct ItReport {
    std::size_t f_it = 0;
    std::size_t v_it = 0;
    std::vector<Index> it_faces;  ///< sorted
};

/// 3D meshes use closed triangle-triangle intersection; 2D meshes count
/// proper crossings between edge segments. Candidate pairs are pruned with a
/// bounding-volume hierarchy; the result equals the all-pairs search.
ItReport it_metrics(const Mesh& mesh);

/// Distribution of |P(V_i)|, the number of ground-truth points whose nearest
/// vertex is V_i, over the bins 0, 1, 2, 3-10, 11-20, 21-30, 31-40, 41-50,
/// 51+.
struct DpviHistogram {
    static constexpr std::size_t kBins = 9;
    static const std::array<std::string, kBins>& labels();
    /// Inclusive lower edge of each bin.
    static constexpr std::array<std::size_t, kBins> lower_edges{0, 1, 2, 3, 11, 21, 31, 41, 51};

    std::array<std::size_t, kBins> counts{};
    std::vector<std::size_t> raw;  ///< |P(V_i)| per vertex

    static std::size_t bin_of(std::size_t cardinality);
};

DpviHistogram dpvi_histogram(const MappingStats& stats);

struct OptaOptions {
    /// Size of the held-out ground-truth sample the DPVI is measured
    /// against, drawn from the points not picked as pseudo-vertices.
    std::size_t dpvi_eval_points = 2500;
    /// Per-set size for the subsampled EMD (clamped to k).
    std::size_t emd_points = 1024;
};

/// Trial means of the metrics scored by a "perfect" reconstruction: k
/// points drawn uniformly from S1 act as the vertex set.
struct OptaResult {
    double cd = 0.0;
    double emd = 0.0;
    std::array<double, DpviHistogram::kBins> dpvi{};  ///< mean vertex count per bin
};

OptaResult opta_baseline(const PointSet& s1, std::size_t k, std::uint64_t seed, std::size_t trials,
                         const OptaOptions& opts = {});

}  // namespace cd2
