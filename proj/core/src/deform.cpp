#include "cd2/deform.hpp"

#include <cmath>
#include <random>
#include <string>

#include "cd2/error.hpp"
#include "cd2/nn_index.hpp"
#include "cd2/shapes.hpp"

namespace cd2 {

namespace {

constexpr std::size_t kTolWindow = 10;

double checked_loss(const LossResult& r, std::size_t iteration) {
    if (!std::isfinite(r.value)) {
        throw NumericalError("iteration " + std::to_string(iteration) + ": loss is not finite");
    }
    return r.value;
}

}  // namespace

void OptConfig::validate() const {
    std::vector<std::string> errors;
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        errors.push_back("learning_rate must be a finite value >= 0, got " + std::to_string(learning_rate));
    }
    if (max_iters < 1) errors.push_back("max_iters must be >= 1");
    if (!(loss_tol >= 0.0) || !std::isfinite(loss_tol)) {
        errors.push_back("loss_tol must be a finite value >= 0, got " + std::to_string(loss_tol));
    }
    if (snapshot_every < 1) errors.push_back("snapshot_every must be >= 1");
    if (!errors.empty()) {
        std::string msg = "invalid optimizer config:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
}

DeformTrace deform(const Mesh& template_mesh, const PointSet& target, const LossConfig& loss_cfg,
                   const OptConfig& opt_cfg, const MetricOptions& metrics) {
    loss_cfg.validate();
    opt_cfg.validate();
    template_mesh.validate();
    if (template_mesh.dim() != target.dim()) {
        throw InputError("template is " + std::to_string(template_mesh.dim()) + "D but target is " +
                         std::to_string(target.dim()) + "D");
    }
    if (template_mesh.vertices.empty() || target.empty()) throw InputError("empty point set");

    DeformTrace trace;
    trace.target = target;
    trace.loss_cfg = loss_cfg;
    trace.opt_cfg = opt_cfg;

    const int dim = template_mesh.dim();
    const double lr = opt_cfg.learning_rate;
    Mesh current = template_mesh;
    std::vector<Vec3> verts(current.vertices.points().begin(), current.vertices.points().end());

    std::size_t applied = 0;
    bool have_final_loss = false;
    double final_loss = 0.0;
    for (std::size_t it = 0; it < opt_cfg.max_iters; ++it) {
        const PointSet s2(verts, dim);
        const LossResult r = loss_eval(target, s2, loss_cfg);
        const double loss = checked_loss(r, it);
        trace.losses.push_back(loss);

        if (it % opt_cfg.snapshot_every == 0) {
            current.vertices = s2;
            trace.snapshots.push_back(Snapshot{it, current, loss, {}});
        }
        const bool converged =
            loss == 0.0 || (opt_cfg.loss_tol > 0.0 && it >= kTolWindow &&
                            trace.losses[it - kTolWindow] - loss < opt_cfg.loss_tol);
        if (converged) {
            have_final_loss = true;
            final_loss = loss;
            break;
        }

        for (std::size_t i = 0; i < verts.size(); ++i) {
            verts[i] -= lr * r.grad[i];
            if (!verts[i].allFinite()) {
                throw NumericalError("iteration " + std::to_string(it) + ": vertex " + std::to_string(i) +
                                     " has non-finite coordinates");
            }
        }
        applied = it + 1;
    }

    current.vertices = PointSet(verts, dim);
    if (!have_final_loss) {
        final_loss = checked_loss(loss_eval(target, current.vertices, loss_cfg), applied);
    }
    if (trace.snapshots.empty() || trace.snapshots.back().iteration != applied) {
        trace.snapshots.push_back(Snapshot{applied, current, final_loss, {}});
    }
    trace.final = std::move(current);
    attach_metrics(trace, metrics);
    return trace;
}

void attach_metrics(DeformTrace& trace, const MetricOptions& metrics) {
    const bool want_vc = !metrics.rhos.empty() && trace.target.size() >= 2;
    const double mean_nn = want_vc ? mean_nn_distance(trace.target) : 0.0;
    for (auto& snap : trace.snapshots) {
        SnapshotMetrics m;
        const auto& v = snap.mesh.vertices;
        if (want_vc && v.size() >= 2) {
            for (double rho : metrics.rhos) m.vc.push_back(vc_metrics(v, trace.target, rho, mean_nn));
        }
        if (metrics.it) m.it = it_metrics(snap.mesh);
        if (metrics.dpvi) {
            const auto tables = nn_tables(trace.target, v);
            m.dpvi = dpvi_histogram(mapping_stats(tables, trace.target.size(), v.size()));
        }
        snap.metrics = std::move(m);
    }
}

DeformTrace run_toy_chair(const LossConfig& loss_cfg, const OptConfig& opt_cfg) {
    auto chair = make_chair_2d();
    std::mt19937_64 rng(opt_cfg.seed);
    std::uniform_real_distribution<double> jitter(-kToyJitter, kToyJitter);
    auto& verts = chair.template_mesh.vertices;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        const double dx = jitter(rng);
        const double dy = jitter(rng);
        verts.set(i, verts[i] + Vec3(dx, dy, 0.0));
    }
    MetricOptions metrics;
    metrics.rhos = {0.5, 0.25};
    return deform(chair.template_mesh, chair.ground_truth, loss_cfg, opt_cfg, metrics);
}

Mesh sphere_template_for(const PointSet& target, int subdivisions) {
    if (target.empty()) throw InputError("empty point set");
    const Vec3 c = target.centroid();
    double radius = 0.0;
    for (const auto& p : target.points()) radius = std::max(radius, (p - c).norm());
    if (radius == 0.0) radius = 1.0;

    Mesh sphere = make_icosphere(subdivisions);
    std::vector<Vec3> verts;
    verts.reserve(sphere.vertices.size());
    for (const auto& p : sphere.vertices.points()) verts.push_back(c + 1.1 * radius * p);
    sphere.vertices = PointSet(std::move(verts), 3);
    return sphere;
}

DeformTrace run_sphere_fit(const Mesh& target_mesh, std::size_t n_points, const LossConfig& loss_cfg,
                           const OptConfig& opt_cfg, int subdivisions) {
    if (target_mesh.dim() != 3 || target_mesh.triangles.empty()) {
        throw InputError("sphere fit needs a 3D triangle mesh as target");
    }
    if (n_points < 100) {
        throw InputError("sphere fit needs at least 100 target points, got " + std::to_string(n_points));
    }
    const PointSet s1 = sample_surface(target_mesh, n_points, opt_cfg.seed);
    MetricOptions metrics;
    metrics.dpvi = true;
    return deform(sphere_template_for(s1, subdivisions), s1, loss_cfg, opt_cfg, metrics);
}

}  // namespace cd2
