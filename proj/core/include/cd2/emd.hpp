#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cd2/geometry.hpp"

namespace cd2 {

/// Result of a square linear assignment problem.
struct Assignment {
    std::vector<Index> row_to_col;
    double cost = 0.0;  ///< sum of cost(i, row_to_col[i]) in row order
};

/// Minimum-cost perfect matching on a dense n x n row-major cost matrix
/// (shortest augmenting paths with dual potentials, O(n^3)).
Assignment solve_assignment(std::span<const double> cost, std::size_t n);

struct EmdOptions {
    std::size_t max_points = 4096;
};

/// Earth mover's distance between equal-size sets: the mean Euclidean
/// (unsquared) length of the optimal one-to-one matching.
///
/// Throws InputError on size mismatch, empty input, dimension mismatch, or
/// when the size exceeds `opts.max_points`.
double emd_exact(const PointSet& s1, const PointSet& s2, const EmdOptions& opts = {});

/// Draws `n` points from each set uniformly without replacement (fixed
/// seed), then applies emd_exact. When n equals both sizes the sets are used
/// as-is.
double emd_subsampled(const PointSet& s1, const PointSet& s2, std::size_t n, std::uint64_t seed,
                      const EmdOptions& opts = {});

/// `n` distinct indices from [0, population), uniformly at random, in draw
/// order (partial Fisher-Yates).
std::vector<Index> sample_indices(std::size_t population, std::size_t n, std::uint64_t seed);

}  // namespace cd2
