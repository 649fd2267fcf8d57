#include "cli/commands.hpp"

#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cd2/error.hpp"
#include "cd2/mesh_io.hpp"

namespace cd2::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json loss_json(const LossConfig& cfg) {
    return ordered_json::parse(loss_config_to_json(cfg));
}

ordered_json opt_json(const OptConfig& o) {
    return {{"learning_rate", o.learning_rate},
            {"max_iters", o.max_iters},
            {"loss_tol", o.loss_tol},
            {"snapshot_every", o.snapshot_every}};
}

ordered_json final_metrics_json(const Snapshot& s) {
    ordered_json f;
    const auto& m = s.metrics;
    f["n_vc"] = m.vc.empty() ? 0 : m.vc.front().n_vc;
    f["n_vc_prime"] = m.vc.empty() ? 0 : m.vc.front().n_vc_prime;
    f["f_it"] = m.it ? m.it->f_it : 0;
    f["v_it"] = m.it ? m.it->v_it : 0;
    f["vc"] = ordered_json::array();
    for (const auto& vc : m.vc) {
        f["vc"].push_back({{"rho", vc.rho}, {"n_vc", vc.n_vc}, {"n_vc_prime", vc.n_vc_prime}});
    }
    if (m.dpvi) {
        ordered_json bins = ordered_json::object();
        for (std::size_t b = 0; b < DpviHistogram::kBins; ++b) {
            bins[DpviHistogram::labels()[b]] = m.dpvi->counts[b];
        }
        f["dpvi"] = bins;
    }
    return f;
}

std::vector<fs::path> timeline_dirs(const fs::path& dir) {
    std::vector<fs::path> out;
    if (fs::exists(dir / "timeline.csv")) out.push_back(dir);
    std::vector<fs::path> subs;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_directory() && fs::exists(e.path() / "timeline.csv")) subs.push_back(e.path());
    }
    std::sort(subs.begin(), subs.end());
    out.insert(out.end(), subs.begin(), subs.end());
    return out;
}

}  // namespace

MetricsReport cmd_metrics(const MetricsJob& job) {
    const Mesh mesh = load_mesh(job.mesh);
    const PointSet points = load_points(job.points);
    PointSet target = points;
    // A 3-column file on a 2D mesh is accepted when every z is 0.
    if (mesh.dim() == 2 && points.dim() == 3) {
        std::vector<std::array<double, 2>> xy;
        for (const auto& p : points.points()) {
            if (p.z() != 0.0) throw InputError(job.points.string() + ": 3D points for a 2D mesh");
            xy.push_back({p.x(), p.y()});
        }
        target = PointSet::from_xy(xy);
    }
    const auto report = compute_metrics(mesh, target, job.options);
    fs::create_directories(job.output_dir);
    write_text(job.output_dir / "metrics.json", metrics_to_json(report));
    write_text(job.output_dir / "metrics.csv", metrics_to_csv(report));
    return report;
}

std::string cmd_deform(const DeformJob& job) {
    std::optional<Mesh> target;
    if (job.scenario == Scenario::sphere_fit) target = load_mesh(job.target_mesh);

    ordered_json summary;
    summary["scenario"] = std::string(to_string(job.scenario));
    summary["seed"] = job.opt.seed;
    summary["optimizer"] = opt_json(job.opt);
    if (job.scenario == Scenario::sphere_fit) {
        summary["sphere_fit"] = {{"target", job.target_mesh.filename().string()},
                                 {"n_points", job.n_points},
                                 {"subdivisions", job.subdivisions}};
    }
    summary["runs"] = ordered_json::array();

    const bool nested = job.runs.size() > 1;
    for (const auto& run : job.runs) {
        const DeformTrace trace = job.scenario == Scenario::toy_chair
                                      ? run_toy_chair(run.loss, job.opt)
                                      : run_sphere_fit(*target, job.n_points, run.loss, job.opt, job.subdivisions);
        const fs::path dir = nested ? job.output_dir / run.label : job.output_dir;
        write_trace(trace, dir);

        ordered_json r;
        r["label"] = run.label;
        r["directory"] = nested ? run.label : ".";
        r["loss"] = loss_json(run.loss);
        r["iterations"] = trace.losses.size();
        r["initial_loss"] = trace.snapshots.front().loss;
        r["final_loss"] = trace.last().loss;
        r["final"] = final_metrics_json(trace.last());
        summary["runs"].push_back(r);
    }
    const std::string text = summary.dump(2) + "\n";
    write_text(job.output_dir / "summary.json", text);
    return text;
}

std::vector<BenchRecord> cmd_bench(const BenchJob& job) {
    auto records = run_bench(job.bench);
    write_text(job.output_dir / "bench.csv", bench_to_csv(records));
    return records;
}

std::vector<fs::path> cmd_report(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw InputError(dir.string() + ": not a directory");
    std::vector<fs::path> written;

    for (const auto& d : timeline_dirs(dir)) {
        const auto rows = timeline_from_csv(read_text(d / "timeline.csv"), (d / "timeline.csv").string());
        Series loss{"loss", {}, {}};
        if (fs::exists(d / "losses.csv")) {
            for (const auto& [it, l] : losses_from_csv(read_text(d / "losses.csv"), (d / "losses.csv").string())) {
                loss.x.push_back(static_cast<double>(it));
                loss.y.push_back(l);
            }
        } else {
            for (const auto& r : rows) {
                loss.x.push_back(static_cast<double>(r.iteration));
                loss.y.push_back(r.loss);
            }
        }
        write_text(d / "loss.svg", line_chart_svg({loss}, {"Loss", "iteration", "loss"}));
        written.push_back(d / "loss.svg");

        std::vector<Series> metrics{{"n_vc", {}, {}}, {"n_vc_prime", {}, {}}, {"f_it", {}, {}}, {"v_it", {}, {}}};
        for (const auto& r : rows) {
            const std::array<double, 4> vals{static_cast<double>(r.n_vc), static_cast<double>(r.n_vc_prime),
                                             static_cast<double>(r.f_it), static_cast<double>(r.v_it)};
            for (std::size_t k = 0; k < metrics.size(); ++k) {
                metrics[k].x.push_back(static_cast<double>(r.iteration));
                metrics[k].y.push_back(vals[k]);
            }
        }
        write_text(d / "metrics.svg", line_chart_svg(metrics, {"Mesh quality", "iteration", "count"}));
        written.push_back(d / "metrics.svg");
    }

    if (fs::exists(dir / "bench.csv")) {
        const auto records = bench_from_csv(read_text(dir / "bench.csv"), (dir / "bench.csv").string());
        std::vector<Series> series;
        std::map<std::string, std::size_t> index;
        for (const auto& r : records) {
            auto [pos, added] = index.emplace(r.metric, series.size());
            if (added) series.push_back(Series{r.metric, {}, {}});
            series[pos->second].x.push_back(static_cast<double>(r.n));
            series[pos->second].y.push_back(r.per_call_s);
        }
        ChartOptions opts{"Time per call", "points per set", "seconds", true, true};
        write_text(dir / "bench.svg", line_chart_svg(series, opts));
        written.push_back(dir / "bench.svg");
    }

    if (written.empty()) throw InputError(dir.string() + ": no timeline.csv or bench.csv found");
    return written;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Chamfer-family losses, mesh quality metrics and deformation experiments"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    std::string rho;
    std::string variant;
    auto shared = [&](CLI::App* sub) {
        sub->add_option("--config", config, "Experiment config (JSON)")->check(CLI::ExistingFile);
        sub->add_option("--out", out, "Output directory (overrides config and CD2_OUTPUT_DIR)");
        sub->add_option("--seed", seed, "Random seed");
        sub->add_option("--rho", rho, "Comma-separated VC radius factors, e.g. 0.25,0.5");
        sub->add_option("--variant", variant, "cd, cd2_distance, cd2_threshold, cd2_percent (bench: also emd)");
    };

    auto* metrics = app.add_subcommand("metrics", "Evaluate CD, EMD, VC, IT and DPVI for a mesh and a point set");
    shared(metrics);
    std::string mesh_path;
    std::string points_path;
    metrics->add_option("--mesh", mesh_path, "Mesh file (.obj / .off)");
    metrics->add_option("--points", points_path, "Point file (.xyz / .csv)");

    auto* deform = app.add_subcommand("deform", "Run a deformation experiment");
    shared(deform);
    auto* bench = app.add_subcommand("bench", "Time the distance computations");
    shared(bench);
    auto* report = app.add_subcommand("report", "Render SVG charts for a deform or bench output directory");
    std::string report_dir;
    report->add_option("dir", report_dir, "Directory written by deform or bench")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    Overrides ov;
    auto collect = [&](CLI::App* sub) {
        if (sub->count("--out")) ov.out = out;
        if (sub->count("--seed")) ov.seed = seed;
        if (sub->count("--rho")) ov.rhos = parse_rho_list(rho);
        if (sub->count("--variant")) ov.variant = variant;
    };
    auto config_dir = [&]() { return fs::absolute(config).parent_path(); };

    try {
        if (metrics->parsed()) {
            collect(metrics);
            MetricsJob job;
            if (!config.empty()) {
                job = parse_metrics_job(read_text(config), config_dir());
            }
            if (!mesh_path.empty()) job.mesh = mesh_path;
            if (!points_path.empty()) job.points = points_path;
            if (job.mesh.empty() || job.points.empty()) {
                throw ConfigError("metrics needs a mesh and a point file (--mesh/--points or --config)");
            }
            apply_overrides(job, ov);
            const auto r = cmd_metrics(job);
            std::cout << "cd " << r.cd_total << "  emd " << r.emd << "  f_it " << r.f_it << "  v_it " << r.v_it
                      << "\nwrote " << (job.output_dir / "metrics.json").string() << "\n";
        } else if (deform->parsed()) {
            collect(deform);
            DeformJob job;
            if (!config.empty()) job = parse_deform_job(read_text(config), config_dir());
            apply_overrides(job, ov);
            cmd_deform(job);
            std::cout << "wrote " << (job.output_dir / "summary.json").string() << "\n";
        } else if (bench->parsed()) {
            collect(bench);
            BenchJob job;
            if (!config.empty()) job = parse_bench_job(read_text(config));
            apply_overrides(job, ov);
            for (const auto& r : cmd_bench(job)) {
                std::cout << r.metric << " n=" << r.n << " per_call_s=" << r.per_call_s << "\n";
            }
        } else if (report->parsed()) {
            for (const auto& p : cmd_report(report_dir)) std::cout << "wrote " << p.string() << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace cd2::cli
