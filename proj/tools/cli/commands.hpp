#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cli/bench.hpp"
#include "cli/config.hpp"
#include "cli/report.hpp"

namespace cd2::cli {

/// Loads the inputs, writes metrics.json and metrics.csv to the output dir.
MetricsReport cmd_metrics(const MetricsJob& job);

/// Runs every configured run. A single run writes its artifacts straight
/// into the output dir; several runs get one subdirectory per label.
/// summary.json (written at the top) holds every run's final metrics.
/// Returns the summary text.
std::string cmd_deform(const DeformJob& job);

/// Writes bench.csv to the output dir.
std::vector<BenchRecord> cmd_bench(const BenchJob& job);

/// Renders loss.svg and metrics.svg next to every timeline.csv found in
/// `dir` or its immediate subdirectories, and bench.svg for a bench.csv.
/// Returns the written files; throws InputError when nothing is found.
std::vector<std::filesystem::path> cmd_report(const std::filesystem::path& dir);

/// Full command-line entry point; returns the process exit code
/// (0 ok, 1 usage/config, 2 data, 3 numerical).
int run_cli(int argc, const char* const* argv);

}  // namespace cd2::cli
