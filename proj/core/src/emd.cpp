#include "cd2/emd.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "cd2/error.hpp"

namespace cd2 {

Assignment solve_assignment(std::span<const double> cost, std::size_t n) {
    if (cost.size() != n * n) {
        throw InputError("assignment cost matrix must be n x n");
    }
    Assignment out;
    if (n == 0) return out;

    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based bookkeeping; column 0 is the virtual source of each augmentation.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_slack(n + 1);
    std::vector<std::size_t> col_owner(n + 1, 0), prev_col(n + 1, 0);
    std::vector<char> used(n + 1);

    for (std::size_t row = 1; row <= n; ++row) {
        col_owner[0] = row;
        std::size_t col = 0;
        std::fill(min_slack.begin(), min_slack.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[col] = 1;
            const std::size_t i = col_owner[col];
            const double* crow = cost.data() + (i - 1) * n;
            double delta = inf;
            std::size_t next = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double reduced = crow[j - 1] - u[i] - v[j];
                if (reduced < min_slack[j]) {
                    min_slack[j] = reduced;
                    prev_col[j] = col;
                }
                if (min_slack[j] < delta) {
                    delta = min_slack[j];
                    next = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[col_owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            col = next;
        } while (col_owner[col] != 0);
        // Flip the alternating path back to the source.
        do {
            const std::size_t p = prev_col[col];
            col_owner[col] = col_owner[p];
            col = p;
        } while (col != 0);
    }

    out.row_to_col.resize(n);
    for (std::size_t j = 1; j <= n; ++j) {
        out.row_to_col[col_owner[j] - 1] = static_cast<Index>(j - 1);
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.cost += cost[i * n + out.row_to_col[i]];
    }
    return out;
}

double emd_exact(const PointSet& s1, const PointSet& s2, const EmdOptions& opts) {
    if (s1.empty() || s2.empty()) {
        throw InputError("empty point set");
    }
    if (s1.dim() != s2.dim()) {
        throw InputError("dimension mismatch");
    }
    if (s1.size() != s2.size()) {
        throw InputError("EMD needs equal-size sets (" + std::to_string(s1.size()) + " vs " +
                         std::to_string(s2.size()) + "); use emd_subsampled");
    }
    const std::size_t n = s1.size();
    if (n > opts.max_points) {
        throw InputError("EMD size " + std::to_string(n) + " exceeds cap " +
                         std::to_string(opts.max_points));
    }
    std::vector<double> cost(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cost[i * n + j] = (s1[i] - s2[j]).norm();
        }
    }
    return solve_assignment(cost, n).cost / static_cast<double>(n);
}

std::vector<Index> sample_indices(std::size_t population, std::size_t n, std::uint64_t seed) {
    if (n > population) {
        throw InputError("cannot draw " + std::to_string(n) + " of " + std::to_string(population));
    }
    std::vector<Index> pool(population);
    std::iota(pool.begin(), pool.end(), Index{0});
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < n; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, population - 1);
        std::swap(pool[k], pool[pick(rng)]);
    }
    pool.resize(n);
    return pool;
}

double emd_subsampled(const PointSet& s1, const PointSet& s2, std::size_t n, std::uint64_t seed,
                      const EmdOptions& opts) {
    if (n == 0) {
        throw InputError("EMD subsample size must be positive");
    }
    if (n > s1.size() || n > s2.size()) {
        throw InputError("EMD subsample size " + std::to_string(n) + " exceeds set size");
    }
    if (n == s1.size() && n == s2.size()) {
        return emd_exact(s1, s2, opts);
    }
    // Independent streams for the two sets.
    const auto a = sample_indices(s1.size(), n, seed);
    const auto b = sample_indices(s2.size(), n, seed ^ 0x9e3779b97f4a7c15ULL);
    return emd_exact(s1.subset(a), s2.subset(b), opts);
}

}  // namespace cd2
