#pragma once

#include <vector>

#include "cd2/geometry.hpp"
#include "cd2/nn_index.hpp"

namespace cd2 {

/// Chamfer distance between ground truth S1 and vertex set S2 with squared
/// Euclidean point distances: part1 = mean(dist1), part2 = mean(dist2),
/// total = part1 + part2.
struct ChamferResult {
    double total = 0.0;
    double part1 = 0.0;
    double part2 = 0.0;
    NnTables tables;
};

ChamferResult chamfer(const PointSet& s1, const PointSet& s2);

/// Same as chamfer() but reuses precomputed tables.
ChamferResult chamfer_from_tables(NnTables tables);

/// Inverted nearest-neighbor maps.
///
/// p_of_v[i]: indices of ground-truth points whose nearest vertex is i.
/// v_of_p[j]: indices of vertices whose nearest ground-truth point is j.
/// Both lists are sorted ascending.
struct MappingStats {
    std::vector<std::vector<Index>> p_of_v;
    std::vector<std::vector<Index>> v_of_p;
};

/// Throws InputError if table sizes disagree with n1/n2 or an index is out
/// of range.
MappingStats mapping_stats(const NnTables& tables, std::size_t n1, std::size_t n2);

}  // namespace cd2
