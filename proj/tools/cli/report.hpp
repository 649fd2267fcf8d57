#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cd2/deform.hpp"
#include "cd2/geometry.hpp"
#include "cd2/quality.hpp"

namespace cd2::cli {

struct MetricsOptions {
    std::vector<double> rhos{0.5, 0.25};
    /// Points drawn from each side for the exact EMD (clamped to the
    /// smaller set).
    std::size_t emd_points = 1024;
    std::uint64_t seed = 0;
};

struct VcSummary {
    double rho = 0.0;
    double sigma = 0.0;
    std::size_t n_vc = 0;
    std::size_t n_vc_prime = 0;
    friend bool operator==(const VcSummary&, const VcSummary&) = default;
};

/// Flat metric report for one (mesh, point set) pair.
struct MetricsReport {
    int dim = 3;
    std::size_t vertices = 0;
    std::size_t faces = 0;
    std::size_t points = 0;
    double cd_total = 0.0;
    double cd_part1 = 0.0;
    double cd_part2 = 0.0;
    double emd = 0.0;
    std::size_t emd_points = 0;
    std::uint64_t emd_seed = 0;
    std::vector<VcSummary> vc;
    std::size_t f_it = 0;
    std::size_t v_it = 0;
    std::array<std::size_t, DpviHistogram::kBins> dpvi{};
    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

MetricsReport compute_metrics(const Mesh& mesh, const PointSet& points, const MetricsOptions& opts);

std::string metrics_to_json(const MetricsReport& r);
MetricsReport metrics_from_json(const std::string& text);
/// Two columns, `metric,value`, one row per scalar.
std::string metrics_to_csv(const MetricsReport& r);
MetricsReport metrics_from_csv(const std::string& text);

/// One row of timeline.csv.
struct TimelineRow {
    std::size_t iteration = 0;
    double loss = 0.0;
    std::size_t n_vc = 0;
    std::size_t n_vc_prime = 0;
    std::size_t f_it = 0;
    std::size_t v_it = 0;
    friend bool operator==(const TimelineRow&, const TimelineRow&) = default;
};

inline constexpr const char* kTimelineHeader = "iteration,loss,n_vc,n_vc_prime,f_it,v_it";

std::vector<TimelineRow> timeline_rows(const DeformTrace& trace);
std::string timeline_to_csv(const std::vector<TimelineRow>& rows);
/// Throws InputError("no data rows") for a header-only file.
std::vector<TimelineRow> timeline_from_csv(const std::string& text, const std::string& name);

/// `iteration,loss` for every executed iteration.
std::string losses_to_csv(const std::vector<double>& losses);
std::vector<std::pair<std::size_t, double>> losses_from_csv(const std::string& text, const std::string& name);

/// Writes snapshot frames (OBJ for 3D, SVG for 2D), timeline.csv and
/// losses.csv into `dir`.
void write_trace(const DeformTrace& trace, const std::filesystem::path& dir);

/// One 2D frame: target points as dots, mesh edges as a path.
std::string frame_svg(const Mesh& mesh, const PointSet& target, const std::string& title);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct ChartOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
};

/// Line chart with one <polyline> per series and a legend.
std::string line_chart_svg(const std::vector<Series>& series, const ChartOptions& opts);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace cd2::cli
