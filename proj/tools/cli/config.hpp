#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cd2/deform.hpp"
#include "cd2/losses.hpp"
#include "cli/bench.hpp"
#include "cli/report.hpp"

namespace cd2::cli {

// Experiment configs are JSON files. Relative paths inside a config resolve
// against the config file's directory. Parsers collect every invalid field
// and throw a single ConfigError listing them all.

struct MetricsJob {
    std::filesystem::path mesh;
    std::filesystem::path points;
    MetricsOptions options;
    std::filesystem::path output_dir = "cd2_out";
};

enum class Scenario { toy_chair, sphere_fit };

struct DeformRun {
    std::string label;
    LossConfig loss;
};

struct DeformJob {
    Scenario scenario = Scenario::toy_chair;
    std::vector<DeformRun> runs{{"cd", LossConfig{}}};
    OptConfig opt;
    std::filesystem::path target_mesh;  ///< sphere_fit only
    std::size_t n_points = 2000;        ///< sphere_fit only
    int subdivisions = 2;               ///< sphere_fit only
    std::filesystem::path output_dir = "cd2_out";
};

struct BenchJob {
    BenchConfig bench;
    std::filesystem::path output_dir = "cd2_out";
};

/// `base_dir` anchors relative paths (normally the config file's folder).
MetricsJob parse_metrics_job(const std::string& json_text, const std::filesystem::path& base_dir);
DeformJob parse_deform_job(const std::string& json_text, const std::filesystem::path& base_dir);
BenchJob parse_bench_job(const std::string& json_text);

/// Command-line overrides shared by the subcommands.
struct Overrides {
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<double>> rhos;
    std::optional<std::string> variant;
};

/// Output directory precedence: --out, then CD2_OUTPUT_DIR, then the config.
std::filesystem::path resolve_output_dir(const std::filesystem::path& configured, const Overrides& o);

void apply_overrides(MetricsJob& job, const Overrides& o);
/// --variant replaces the run list with a single run of that variant.
void apply_overrides(DeformJob& job, const Overrides& o);
/// --variant restricts the timed metrics to that one.
void apply_overrides(BenchJob& job, const Overrides& o);

/// Parses "0.25,0.5"; throws ConfigError on bad entries or rho <= 0.
std::vector<double> parse_rho_list(const std::string& text);

std::string_view to_string(Scenario s);

}  // namespace cd2::cli
