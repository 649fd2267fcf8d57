#include "cli/bench.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "cd2/chamfer.hpp"
#include "cd2/emd.hpp"
#include "cd2/error.hpp"
#include "cd2/losses.hpp"

namespace cd2::cli {

namespace {

bool known_metric(const std::string& m) {
    return m == "cd" || m == "cd2_distance" || m == "cd2_threshold" || m == "cd2_percent" || m == "emd";
}

PointSet random_cube(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec3> pts(n);
    for (auto& p : pts) {
        const double x = u(rng);
        const double y = u(rng);
        const double z = u(rng);
        p = Vec3(x, y, z);
    }
    return PointSet(std::move(pts), 3);
}

double evaluate(const std::string& metric, const PointSet& s1, const PointSet& s2) {
    if (metric == "cd") return chamfer(s1, s2).total;
    if (metric == "emd") return emd_exact(s1, s2);
    LossConfig cfg;
    cfg.variant = parse_variant(metric);
    return loss_eval(s1, s2, cfg).value;
}

std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

void BenchConfig::validate() const {
    std::vector<std::string> errors;
    if (sizes.empty()) errors.push_back("sizes must not be empty");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0) errors.push_back("sizes[" + std::to_string(i) + "] must be positive");
        if (i > 0 && sizes[i] <= sizes[i - 1]) errors.push_back("sizes must be strictly ascending");
    }
    if (repetitions < 1) errors.push_back("repetitions must be >= 1");
    if (metrics.empty()) errors.push_back("metrics must not be empty");
    bool emd = false;
    for (const auto& m : metrics) {
        if (!known_metric(m)) errors.push_back("unknown metric '" + m + "'");
        emd = emd || m == "emd";
    }
    const std::size_t cap = EmdOptions{}.max_points;
    if (emd && !sizes.empty() && sizes.back() > cap) {
        errors.push_back("EMD sizes are capped at " + std::to_string(cap) + ", got " +
                         std::to_string(sizes.back()));
    }
    if (!errors.empty()) {
        std::string msg = "invalid bench config:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
}

std::vector<BenchRecord> run_bench(const BenchConfig& cfg) {
    cfg.validate();
    using clock = std::chrono::steady_clock;
    std::vector<BenchRecord> out;
    volatile double sink = 0.0;
    for (std::size_t n : cfg.sizes) {
        std::mt19937_64 rng(cfg.seed + n);
        const PointSet s1 = random_cube(n, rng);
        const PointSet s2 = random_cube(n, rng);
        for (const auto& metric : cfg.metrics) {
            const std::size_t reps =
                metric == "emd" && cfg.emd_repetitions > 0 ? cfg.emd_repetitions : cfg.repetitions;
            for (std::size_t w = 0; w < reps / 10; ++w) sink = sink + evaluate(metric, s1, s2);
            const auto start = clock::now();
            for (std::size_t r = 0; r < reps; ++r) sink = sink + evaluate(metric, s1, s2);
            const double total = std::chrono::duration<double>(clock::now() - start).count();
            out.push_back(BenchRecord{metric, n, reps, total, total / static_cast<double>(reps)});
        }
    }
    return out;
}

std::string bench_to_csv(const std::vector<BenchRecord>& records) {
    std::ostringstream out;
    out << kBenchHeader << "\n";
    for (const auto& r : records) {
        out << r.metric << "," << r.n << "," << r.reps << "," << fmt_double(r.total_s) << ","
            << fmt_double(r.per_call_s) << "\n";
    }
    return out.str();
}

std::vector<BenchRecord> bench_from_csv(const std::string& text, const std::string& name) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    auto next = [&]() {
        if (!std::getline(in, line)) return false;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    };
    if (!next() || line != kBenchHeader) {
        throw ParseError(name, 1, std::string("expected header '") + kBenchHeader + "'");
    }
    std::vector<BenchRecord> out;
    while (next()) {
        if (line.empty()) continue;
        std::vector<std::string> c;
        std::string cur;
        std::istringstream cells(line);
        while (std::getline(cells, cur, ',')) c.push_back(cur);
        if (c.size() != 5) throw ParseError(name, line_no, "expected 5 columns");
        BenchRecord r;
        r.metric = c[0];
        auto parse = [&](const std::string& s, auto& v) {
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
                throw ParseError(name, line_no, "invalid number '" + s + "'");
            }
        };
        parse(c[1], r.n);
        parse(c[2], r.reps);
        parse(c[3], r.total_s);
        parse(c[4], r.per_call_s);
        if (r.n == 0 || r.reps == 0) throw ParseError(name, line_no, "n and reps must be positive");
        out.push_back(r);
    }
    if (out.empty()) throw ParseError(name, 0, "no data rows");
    return out;
}

NlognFit fit_nlogn(const std::vector<double>& n, const std::vector<double>& t) {
    if (n.size() != t.size() || n.size() < 2) throw InputError("fit needs at least two (n, t) pairs");
    double sxx = 0.0;
    double sxy = 0.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double x = n[i] * std::log(n[i]);
        sxx += x * x;
        sxy += x * t[i];
        mean += t[i];
    }
    mean /= static_cast<double>(t.size());
    NlognFit fit;
    fit.c = sxy / sxx;
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double e = t[i] - fit.c * n[i] * std::log(n[i]);
        ss_res += e * e;
        ss_tot += (t[i] - mean) * (t[i] - mean);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
    return fit;
}

}  // namespace cd2::cli
