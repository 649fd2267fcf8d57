#include "cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "cd2/error.hpp"

namespace cd2::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

json parse_object(const std::string& text, const char* what) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string(what) + " config is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ConfigError(std::string(what) + " config must be a JSON object");
    return j;
}

[[noreturn]] void fail(const char* what, const std::vector<std::string>& errors) {
    std::string msg = std::string("invalid ") + what + " config:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
}

// Typed field access that records problems instead of throwing.
class Fields {
public:
    Fields(const json& obj, std::string prefix, std::vector<std::string>& errors)
        : obj_(obj), prefix_(std::move(prefix)), errors_(errors) {}

    bool has(const char* key) const { return obj_.contains(key); }

    std::string name(const char* key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

    void get(const char* key, double& out) const {
        if (!has(key)) return;
        const auto& v = obj_.at(key);
        if (!v.is_number()) return wrong(key, "a number");
        out = v.get<double>();
    }
    template <typename U>
        requires std::is_unsigned_v<U>
    void get(const char* key, U& out) const {
        if (!has(key)) return;
        const auto& v = obj_.at(key);
        if (!v.is_number_unsigned()) return wrong(key, "a non-negative integer");
        out = v.get<U>();
    }
    void get(const char* key, int& out) const {
        if (!has(key)) return;
        const auto& v = obj_.at(key);
        if (!v.is_number_integer()) return wrong(key, "an integer");
        out = v.get<int>();
    }
    void get(const char* key, std::string& out) const {
        if (!has(key)) return;
        const auto& v = obj_.at(key);
        if (!v.is_string()) return wrong(key, "a string");
        out = v.get<std::string>();
    }

    /// Existing file path, resolved against base.
    void get_path(const char* key, fs::path& out, const fs::path& base, bool required) const {
        if (!has(key)) {
            if (required) errors_.push_back(name(key) + " is required");
            return;
        }
        std::string s;
        get(key, s);
        if (s.empty()) return;
        fs::path p(s);
        if (p.is_relative()) p = base / p;
        if (!fs::exists(p)) {
            errors_.push_back(name(key) + ": file not found: " + p.string());
            return;
        }
        out = p;
    }

    void reject_unknown(std::initializer_list<const char*> known) const {
        for (const auto& [key, value] : obj_.items()) {
            bool ok = false;
            for (const char* k : known) ok = ok || key == k;
            if (!ok) errors_.push_back("unknown key '" + name(key.c_str()) + "'");
        }
    }

    void error(const std::string& msg) const { errors_.push_back(msg); }

private:
    void wrong(const char* key, const char* expected) const {
        errors_.push_back(name(key) + " must be " + expected);
    }

    const json& obj_;
    std::string prefix_;
    std::vector<std::string>& errors_;
};

void read_rhos(const json& obj, const char* key, std::vector<double>& out, std::vector<std::string>& errors) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_array() || v.empty()) {
        errors.push_back(std::string(key) + " must be a non-empty array of numbers");
        return;
    }
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number() || !(v[i].get<double>() > 0.0) || !std::isfinite(v[i].get<double>())) {
            errors.push_back(std::string(key) + "[" + std::to_string(i) + "] must be a positive number");
            continue;
        }
        out.push_back(v[i].get<double>());
    }
}

// Validation errors from the owning module, re-prefixed per line.
void absorb(const ConfigError& e, const std::string& prefix, std::vector<std::string>& errors) {
    std::istringstream in(e.what());
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            if (line.back() == ':') continue;  // "invalid ... config:" heading
        }
        const auto start = line.find_first_not_of(' ');
        errors.push_back(prefix + ": " + line.substr(start == std::string::npos ? 0 : start));
    }
}

}  // namespace

std::string_view to_string(Scenario s) { return s == Scenario::toy_chair ? "toy_chair" : "sphere_fit"; }

MetricsJob parse_metrics_job(const std::string& text, const fs::path& base_dir) {
    const json j = parse_object(text, "metrics");
    std::vector<std::string> errors;
    const Fields f(j, "", errors);
    f.reject_unknown({"mesh", "points", "rho", "emd_points", "seed", "output_dir"});

    MetricsJob job;
    f.get_path("mesh", job.mesh, base_dir, true);
    f.get_path("points", job.points, base_dir, true);
    read_rhos(j, "rho", job.options.rhos, errors);
    f.get("emd_points", job.options.emd_points);
    if (job.options.emd_points == 0) errors.push_back("emd_points must be positive");
    f.get("seed", job.options.seed);
    std::string out;
    f.get("output_dir", out);
    if (!out.empty()) job.output_dir = out;
    if (!errors.empty()) fail("metrics", errors);
    return job;
}

DeformJob parse_deform_job(const std::string& text, const fs::path& base_dir) {
    const json j = parse_object(text, "deform");
    std::vector<std::string> errors;
    const Fields f(j, "", errors);
    f.reject_unknown({"scenario", "seed", "optimizer", "loss", "runs", "sphere_fit", "output_dir"});

    DeformJob job;
    std::string scenario = "toy_chair";
    f.get("scenario", scenario);
    if (scenario == "toy_chair") {
        job.scenario = Scenario::toy_chair;
    } else if (scenario == "sphere_fit") {
        job.scenario = Scenario::sphere_fit;
    } else {
        errors.push_back("scenario must be toy_chair or sphere_fit, got '" + scenario + "'");
    }
    f.get("seed", job.opt.seed);

    if (j.contains("optimizer")) {
        const auto& o = j.at("optimizer");
        if (!o.is_object()) {
            errors.push_back("optimizer must be an object");
        } else {
            const Fields of(o, "optimizer", errors);
            of.reject_unknown({"learning_rate", "max_iters", "loss_tol", "snapshot_every"});
            of.get("learning_rate", job.opt.learning_rate);
            of.get("max_iters", job.opt.max_iters);
            of.get("loss_tol", job.opt.loss_tol);
            of.get("snapshot_every", job.opt.snapshot_every);
            try {
                job.opt.validate();
            } catch (const ConfigError& e) {
                absorb(e, "optimizer", errors);
            }
        }
    }

    auto read_loss = [&](const json& l, const std::string& where) {
        try {
            return parse_loss_config(l.dump());
        } catch (const ConfigError& e) {
            absorb(e, where, errors);
            return LossConfig{};
        }
    };
    if (j.contains("loss") && j.contains("runs")) errors.push_back("give either loss or runs, not both");
    if (j.contains("loss")) {
        const auto cfg = read_loss(j.at("loss"), "loss");
        job.runs = {{std::string(to_string(cfg.variant)), cfg}};
    } else if (j.contains("runs")) {
        const auto& runs = j.at("runs");
        if (!runs.is_array() || runs.empty()) {
            errors.push_back("runs must be a non-empty array");
        } else {
            job.runs.clear();
            for (std::size_t i = 0; i < runs.size(); ++i) {
                const std::string where = "runs[" + std::to_string(i) + "]";
                if (!runs[i].is_object()) {
                    errors.push_back(where + " must be an object");
                    continue;
                }
                const Fields rf(runs[i], where, errors);
                rf.reject_unknown({"label", "loss"});
                DeformRun run;
                run.loss = runs[i].contains("loss") ? read_loss(runs[i].at("loss"), where + ".loss") : LossConfig{};
                run.label = std::string(to_string(run.loss.variant));
                rf.get("label", run.label);
                for (const auto& prev : job.runs) {
                    if (prev.label == run.label) errors.push_back(where + ".label '" + run.label + "' is not unique");
                }
                job.runs.push_back(run);
            }
        }
    }

    if (job.scenario == Scenario::sphere_fit) {
        if (!j.contains("sphere_fit") || !j.at("sphere_fit").is_object()) {
            errors.push_back("sphere_fit block is required for scenario sphere_fit");
        } else {
            const Fields sf(j.at("sphere_fit"), "sphere_fit", errors);
            sf.reject_unknown({"target", "n_points", "subdivisions"});
            sf.get_path("target", job.target_mesh, base_dir, true);
            sf.get("n_points", job.n_points);
            sf.get("subdivisions", job.subdivisions);
            if (job.n_points < 100) errors.push_back("sphere_fit.n_points must be >= 100");
            if (job.subdivisions < 0 || job.subdivisions > 6) {
                errors.push_back("sphere_fit.subdivisions must be in [0, 6]");
            }
        }
    }

    std::string out;
    f.get("output_dir", out);
    if (!out.empty()) job.output_dir = out;
    if (!errors.empty()) fail("deform", errors);
    return job;
}

BenchJob parse_bench_job(const std::string& text) {
    const json j = parse_object(text, "bench");
    std::vector<std::string> errors;
    const Fields f(j, "", errors);
    f.reject_unknown({"sizes", "repetitions", "emd_repetitions", "metrics", "seed", "output_dir"});

    BenchJob job;
    if (j.contains("sizes")) {
        const auto& s = j.at("sizes");
        if (!s.is_array()) {
            errors.push_back("sizes must be an array of positive integers");
        } else {
            job.bench.sizes.clear();
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (!s[i].is_number_unsigned()) {
                    errors.push_back("sizes[" + std::to_string(i) + "] must be a positive integer");
                    continue;
                }
                job.bench.sizes.push_back(s[i].get<std::size_t>());
            }
        }
    }
    if (j.contains("metrics")) {
        const auto& m = j.at("metrics");
        if (!m.is_array()) {
            errors.push_back("metrics must be an array of names");
        } else {
            job.bench.metrics.clear();
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (!m[i].is_string()) {
                    errors.push_back("metrics[" + std::to_string(i) + "] must be a string");
                    continue;
                }
                job.bench.metrics.push_back(m[i].get<std::string>());
            }
        }
    }
    f.get("repetitions", job.bench.repetitions);
    f.get("emd_repetitions", job.bench.emd_repetitions);
    f.get("seed", job.bench.seed);
    std::string out;
    f.get("output_dir", out);
    if (!out.empty()) job.output_dir = out;
    try {
        job.bench.validate();
    } catch (const ConfigError& e) {
        absorb(e, "bench", errors);
    }
    if (!errors.empty()) fail("bench", errors);
    return job;
}

fs::path resolve_output_dir(const fs::path& configured, const Overrides& o) {
    if (o.out) return *o.out;
    if (const char* env = std::getenv("CD2_OUTPUT_DIR"); env && *env) return env;
    return configured;
}

void apply_overrides(MetricsJob& job, const Overrides& o) {
    if (o.seed) job.options.seed = *o.seed;
    if (o.rhos) job.options.rhos = *o.rhos;
    if (o.variant) throw ConfigError("--variant does not apply to the metrics command");
    job.output_dir = resolve_output_dir(job.output_dir, o);
}

void apply_overrides(DeformJob& job, const Overrides& o) {
    if (o.seed) job.opt.seed = *o.seed;
    if (o.variant) {
        LossConfig cfg = job.runs.front().loss;
        cfg.variant = parse_variant(*o.variant);
        cfg.validate();
        job.runs = {{*o.variant, cfg}};
    }
    if (o.rhos) throw ConfigError("--rho does not apply to the deform command");
    job.output_dir = resolve_output_dir(job.output_dir, o);
}

void apply_overrides(BenchJob& job, const Overrides& o) {
    if (o.seed) job.bench.seed = *o.seed;
    if (o.variant) {
        job.bench.metrics = {*o.variant};
        job.bench.validate();
    }
    if (o.rhos) throw ConfigError("--rho does not apply to the bench command");
    job.output_dir = resolve_output_dir(job.output_dir, o);
}

std::vector<double> parse_rho_list(const std::string& text) {
    std::vector<double> out;
    std::vector<std::string> errors;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size() || !(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            errors.push_back("rho entry '" + item + "' is not a positive number");
        }
    }
    if (out.empty() && errors.empty()) errors.push_back("rho list is empty");
    if (!errors.empty()) fail("--rho", errors);
    return out;
}

}  // namespace cd2::cli
