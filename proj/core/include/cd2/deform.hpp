#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cd2/geometry.hpp"
#include "cd2/losses.hpp"
#include "cd2/quality.hpp"

namespace cd2 {

/// Plain gradient descent settings.
struct OptConfig {
    double learning_rate = 1e-2;
    std::size_t max_iters = 2000;
    /// Stop once the loss improved by less than this over the last 10
    /// iterations. 0 disables the check.
    double loss_tol = 0.0;
    std::size_t snapshot_every = 100;
    std::uint64_t seed = 0;

    /// Throws ConfigError listing every invalid field.
    void validate() const;

    friend bool operator==(const OptConfig&, const OptConfig&) = default;
};

/// Which metrics to attach to each snapshot.
struct MetricOptions {
    /// VC radii factors. The first one is the headline value (timeline CSV,
    /// summaries).
    std::vector<double> rhos{0.5, 0.25};
    bool it = true;
    bool dpvi = false;
};

struct SnapshotMetrics {
    std::vector<VcReport> vc;  ///< one per MetricOptions::rhos entry
    std::optional<ItReport> it;
    std::optional<DpviHistogram> dpvi;
};

struct Snapshot {
    std::size_t iteration = 0;  ///< number of updates applied before the copy
    Mesh mesh;
    double loss = 0.0;          ///< loss of this mesh
    SnapshotMetrics metrics;
};

struct DeformTrace {
    PointSet target{3};
    LossConfig loss_cfg;
    OptConfig opt_cfg;
    std::vector<Snapshot> snapshots;  ///< first: template, last: final mesh
    std::vector<double> losses;       ///< loss evaluated at each executed iteration
    Mesh final;

    const Snapshot& last() const { return snapshots.back(); }
};

/// Moves every vertex against the loss gradient:
/// V <- V - learning_rate * grad(loss(target, V)).
///
/// Each iteration evaluates the loss (both passes for CD²), records it, then
/// updates. The run stops after max_iters updates, when the loss is exactly
/// 0, or when the 10-iteration improvement drops below loss_tol; in the last
/// two cases no update is applied for the stopping iteration. Connectivity
/// is copied unchanged.
///
/// Throws InputError on dimension mismatch and NumericalError (with the
/// iteration and vertex) when the loss or a coordinate stops being finite.
DeformTrace deform(const Mesh& template_mesh, const PointSet& target, const LossConfig& loss_cfg,
                   const OptConfig& opt_cfg, const MetricOptions& metrics = {});

/// Recomputes the snapshot metrics of a finished trace.
void attach_metrics(DeformTrace& trace, const MetricOptions& metrics);

/// Uniform jitter applied to the toy template vertices; opt_cfg.seed picks it.
inline constexpr double kToyJitter = 0.01;

/// Deforms the circle template of make_chair_2d() onto the chair outline.
/// Metrics: VC at rho 0.5 and 0.25 plus 2D IT at every snapshot.
DeformTrace run_toy_chair(const LossConfig& loss_cfg, const OptConfig& opt_cfg);

/// Samples `n_points` from `target_mesh` (seeded by opt_cfg.seed), fits an
/// icosphere of the given subdivision level scaled to 1.1 times the bounding
/// sphere of the samples and centered at their centroid. Metrics: VC, IT
/// and DPVI at every snapshot.
DeformTrace run_sphere_fit(const Mesh& target_mesh, std::size_t n_points, const LossConfig& loss_cfg,
                           const OptConfig& opt_cfg, int subdivisions);

/// Icosphere scaled and centered as described for run_sphere_fit.
Mesh sphere_template_for(const PointSet& target, int subdivisions);

}  // namespace cd2
