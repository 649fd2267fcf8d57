#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cd2::cli {

/// Timing of one metric at one set size. per_call_s == total_s / reps.
struct BenchRecord {
    std::string metric;
    std::size_t n = 0;
    std::size_t reps = 0;
    double total_s = 0.0;
    double per_call_s = 0.0;
    friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

/// Metric names: cd, cd2_distance, cd2_threshold, cd2_percent, emd.
struct BenchConfig {
    std::vector<std::size_t> sizes{1000, 2000, 4000, 8000};
    std::size_t repetitions = 10;
    std::vector<std::string> metrics{"cd", "cd2_distance", "cd2_threshold", "cd2_percent"};
    /// Optional per-metric repetition override for slow metrics (0 = use
    /// `repetitions`).
    std::size_t emd_repetitions = 0;
    std::uint64_t seed = 0;

    /// Throws ConfigError listing every problem: empty or non-ascending
    /// sizes, zero sizes, zero repetitions, unknown metrics, EMD sizes above
    /// the exact-solver cap.
    void validate() const;
};

inline constexpr const char* kBenchHeader = "metric,n,reps,total_s,per_call_s";

/// Times each metric on random same-size point pairs (uniform in the unit
/// cube). Warm-up calls (10% of reps, rounded down) run first and are not
/// timed. Uses a monotonic clock.
std::vector<BenchRecord> run_bench(const BenchConfig& cfg);

std::string bench_to_csv(const std::vector<BenchRecord>& records);
std::vector<BenchRecord> bench_from_csv(const std::string& text, const std::string& name);

/// Least-squares fit of t = c * n * log(n) through the origin.
struct NlognFit {
    double c = 0.0;
    double r2 = 0.0;
};
NlognFit fit_nlogn(const std::vector<double>& n, const std::vector<double>& t);

}  // namespace cd2::cli
