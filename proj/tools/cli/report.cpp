#include "cli/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cd2/chamfer.hpp"
#include "cd2/emd.hpp"
#include "cd2/error.hpp"
#include "cd2/mesh_io.hpp"
#include "cd2/nn_index.hpp"

namespace cd2::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fmt_fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.push_back(line);
    }
    return out;
}

double parse_double(const std::string& s, const std::string& name, std::size_t line) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseError(name, line, "invalid number '" + s + "'");
    }
    return v;
}

std::size_t parse_size(const std::string& s, const std::string& name, std::size_t line) {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseError(name, line, "invalid integer '" + s + "'");
    }
    return v;
}

std::size_t dpvi_bin_index(const std::string& label) {
    const auto& labels = DpviHistogram::labels();
    for (std::size_t b = 0; b < labels.size(); ++b) {
        if (labels[b] == label) return b;
    }
    throw InputError("unknown DPVI bin '" + label + "'");
}

}  // namespace

MetricsReport compute_metrics(const Mesh& mesh, const PointSet& points, const MetricsOptions& opts) {
    mesh.validate();
    const PointSet& verts = mesh.vertices;
    if (verts.empty() || points.empty()) throw InputError("empty point set");
    if (verts.dim() != points.dim()) {
        throw InputError("mesh is " + std::to_string(verts.dim()) + "D but points are " +
                         std::to_string(points.dim()) + "D");
    }
    if (opts.emd_points == 0) throw InputError("emd_points must be positive");

    MetricsReport r;
    r.dim = verts.dim();
    r.vertices = verts.size();
    r.faces = mesh.face_count();
    r.points = points.size();

    const auto cd = chamfer(points, verts);
    r.cd_total = cd.total;
    r.cd_part1 = cd.part1;
    r.cd_part2 = cd.part2;

    r.emd_points = std::min({opts.emd_points, points.size(), verts.size()});
    r.emd_seed = opts.seed;
    r.emd = emd_subsampled(points, verts, r.emd_points, opts.seed);

    if (!opts.rhos.empty()) {
        if (points.size() < 2 || verts.size() < 2) {
            throw InputError("VC metrics need at least two vertices and two points");
        }
        const double mean_nn = mean_nn_distance(points);
        for (double rho : opts.rhos) {
            const auto vc = vc_metrics(verts, points, rho, mean_nn);
            r.vc.push_back(VcSummary{rho, vc.sigma_vc, vc.n_vc, vc.n_vc_prime});
        }
    }

    const auto it = it_metrics(mesh);
    r.f_it = it.f_it;
    r.v_it = it.v_it;
    r.dpvi = dpvi_histogram(mapping_stats(cd.tables, points.size(), verts.size())).counts;
    return r;
}

std::string metrics_to_json(const MetricsReport& r) {
    ordered_json j;
    j["inputs"] = {{"dim", r.dim}, {"vertices", r.vertices}, {"faces", r.faces}, {"points", r.points}};
    j["cd"] = {{"total", r.cd_total}, {"part1", r.cd_part1}, {"part2", r.cd_part2}};
    j["emd"] = {{"value", r.emd}, {"points", r.emd_points}, {"seed", r.emd_seed}};
    j["vc"] = ordered_json::array();
    for (const auto& v : r.vc) {
        j["vc"].push_back({{"rho", v.rho}, {"sigma", v.sigma}, {"n_vc", v.n_vc}, {"n_vc_prime", v.n_vc_prime}});
    }
    j["it"] = {{"f_it", r.f_it}, {"v_it", r.v_it}};
    ordered_json bins = ordered_json::object();
    for (std::size_t b = 0; b < DpviHistogram::kBins; ++b) bins[DpviHistogram::labels()[b]] = r.dpvi[b];
    j["dpvi"] = bins;
    return j.dump(2) + "\n";
}

MetricsReport metrics_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        MetricsReport r;
        r.dim = j.at("inputs").at("dim").get<int>();
        r.vertices = j.at("inputs").at("vertices").get<std::size_t>();
        r.faces = j.at("inputs").at("faces").get<std::size_t>();
        r.points = j.at("inputs").at("points").get<std::size_t>();
        r.cd_total = j.at("cd").at("total").get<double>();
        r.cd_part1 = j.at("cd").at("part1").get<double>();
        r.cd_part2 = j.at("cd").at("part2").get<double>();
        r.emd = j.at("emd").at("value").get<double>();
        r.emd_points = j.at("emd").at("points").get<std::size_t>();
        r.emd_seed = j.at("emd").at("seed").get<std::uint64_t>();
        for (const auto& v : j.at("vc")) {
            r.vc.push_back(VcSummary{v.at("rho").get<double>(), v.at("sigma").get<double>(),
                                     v.at("n_vc").get<std::size_t>(), v.at("n_vc_prime").get<std::size_t>()});
        }
        r.f_it = j.at("it").at("f_it").get<std::size_t>();
        r.v_it = j.at("it").at("v_it").get<std::size_t>();
        for (const auto& [label, count] : j.at("dpvi").items()) {
            r.dpvi[dpvi_bin_index(label)] = count.get<std::size_t>();
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed metrics JSON: ") + e.what());
    }
}

std::string metrics_to_csv(const MetricsReport& r) {
    std::ostringstream out;
    out << "metric,value\n";
    out << "dim," << r.dim << "\n";
    out << "vertices," << r.vertices << "\n";
    out << "faces," << r.faces << "\n";
    out << "points," << r.points << "\n";
    out << "cd.total," << fmt_double(r.cd_total) << "\n";
    out << "cd.part1," << fmt_double(r.cd_part1) << "\n";
    out << "cd.part2," << fmt_double(r.cd_part2) << "\n";
    out << "emd.value," << fmt_double(r.emd) << "\n";
    out << "emd.points," << r.emd_points << "\n";
    out << "emd.seed," << r.emd_seed << "\n";
    for (std::size_t k = 0; k < r.vc.size(); ++k) {
        const auto p = "vc." + std::to_string(k) + ".";
        out << p << "rho," << fmt_double(r.vc[k].rho) << "\n";
        out << p << "sigma," << fmt_double(r.vc[k].sigma) << "\n";
        out << p << "n_vc," << r.vc[k].n_vc << "\n";
        out << p << "n_vc_prime," << r.vc[k].n_vc_prime << "\n";
    }
    out << "it.f_it," << r.f_it << "\n";
    out << "it.v_it," << r.v_it << "\n";
    for (std::size_t b = 0; b < DpviHistogram::kBins; ++b) {
        out << "dpvi." << DpviHistogram::labels()[b] << "," << r.dpvi[b] << "\n";
    }
    return out.str();
}

MetricsReport metrics_from_csv(const std::string& text) {
    const std::string name = "metrics.csv";
    const auto lines = lines_of(text);
    if (lines.empty() || lines[0] != "metric,value") throw ParseError(name, 1, "expected header 'metric,value'");

    MetricsReport r;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto cols = split(lines[i], ',');
        if (cols.size() != 2) throw ParseError(name, i + 1, "expected 2 columns");
        const auto& key = cols[0];
        const auto& val = cols[1];
        const auto line = i + 1;
        if (key == "dim") {
            r.dim = static_cast<int>(parse_size(val, name, line));
        } else if (key == "vertices") {
            r.vertices = parse_size(val, name, line);
        } else if (key == "faces") {
            r.faces = parse_size(val, name, line);
        } else if (key == "points") {
            r.points = parse_size(val, name, line);
        } else if (key == "cd.total") {
            r.cd_total = parse_double(val, name, line);
        } else if (key == "cd.part1") {
            r.cd_part1 = parse_double(val, name, line);
        } else if (key == "cd.part2") {
            r.cd_part2 = parse_double(val, name, line);
        } else if (key == "emd.value") {
            r.emd = parse_double(val, name, line);
        } else if (key == "emd.points") {
            r.emd_points = parse_size(val, name, line);
        } else if (key == "emd.seed") {
            r.emd_seed = parse_size(val, name, line);
        } else if (key == "it.f_it") {
            r.f_it = parse_size(val, name, line);
        } else if (key == "it.v_it") {
            r.v_it = parse_size(val, name, line);
        } else if (key.rfind("dpvi.", 0) == 0) {
            r.dpvi[dpvi_bin_index(key.substr(5))] = parse_size(val, name, line);
        } else if (key.rfind("vc.", 0) == 0) {
            const auto dot = key.find('.', 3);
            if (dot == std::string::npos) throw ParseError(name, line, "bad key '" + key + "'");
            const auto k = parse_size(key.substr(3, dot - 3), name, line);
            if (k >= r.vc.size()) r.vc.resize(k + 1);
            const auto field = key.substr(dot + 1);
            if (field == "rho") {
                r.vc[k].rho = parse_double(val, name, line);
            } else if (field == "sigma") {
                r.vc[k].sigma = parse_double(val, name, line);
            } else if (field == "n_vc") {
                r.vc[k].n_vc = parse_size(val, name, line);
            } else if (field == "n_vc_prime") {
                r.vc[k].n_vc_prime = parse_size(val, name, line);
            } else {
                throw ParseError(name, line, "bad key '" + key + "'");
            }
        } else {
            throw ParseError(name, line, "unknown metric '" + key + "'");
        }
    }
    return r;
}

std::vector<TimelineRow> timeline_rows(const DeformTrace& trace) {
    std::vector<TimelineRow> rows;
    for (const auto& s : trace.snapshots) {
        TimelineRow row;
        row.iteration = s.iteration;
        row.loss = s.loss;
        if (!s.metrics.vc.empty()) {
            row.n_vc = s.metrics.vc.front().n_vc;
            row.n_vc_prime = s.metrics.vc.front().n_vc_prime;
        }
        if (s.metrics.it) {
            row.f_it = s.metrics.it->f_it;
            row.v_it = s.metrics.it->v_it;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string timeline_to_csv(const std::vector<TimelineRow>& rows) {
    std::ostringstream out;
    out << kTimelineHeader << "\n";
    for (const auto& r : rows) {
        out << r.iteration << "," << fmt_double(r.loss) << "," << r.n_vc << "," << r.n_vc_prime << ","
            << r.f_it << "," << r.v_it << "\n";
    }
    return out.str();
}

std::vector<TimelineRow> timeline_from_csv(const std::string& text, const std::string& name) {
    const auto lines = lines_of(text);
    if (lines.empty() || lines[0] != kTimelineHeader) {
        throw ParseError(name, 1, std::string("expected header '") + kTimelineHeader + "'");
    }
    std::vector<TimelineRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto c = split(lines[i], ',');
        if (c.size() != 6) throw ParseError(name, i + 1, "expected 6 columns");
        rows.push_back(TimelineRow{parse_size(c[0], name, i + 1), parse_double(c[1], name, i + 1),
                                   parse_size(c[2], name, i + 1), parse_size(c[3], name, i + 1),
                                   parse_size(c[4], name, i + 1), parse_size(c[5], name, i + 1)});
    }
    if (rows.empty()) throw ParseError(name, 0, "no data rows");
    return rows;
}

std::string losses_to_csv(const std::vector<double>& losses) {
    std::ostringstream out;
    out << "iteration,loss\n";
    for (std::size_t i = 0; i < losses.size(); ++i) out << i << "," << fmt_double(losses[i]) << "\n";
    return out.str();
}

std::vector<std::pair<std::size_t, double>> losses_from_csv(const std::string& text, const std::string& name) {
    const auto lines = lines_of(text);
    if (lines.empty() || lines[0] != "iteration,loss") {
        throw ParseError(name, 1, "expected header 'iteration,loss'");
    }
    std::vector<std::pair<std::size_t, double>> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto c = split(lines[i], ',');
        if (c.size() != 2) throw ParseError(name, i + 1, "expected 2 columns");
        rows.emplace_back(parse_size(c[0], name, i + 1), parse_double(c[1], name, i + 1));
    }
    if (rows.empty()) throw ParseError(name, 0, "no data rows");
    return rows;
}

void write_trace(const DeformTrace& trace, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& s : trace.snapshots) {
        char stem[32];
        if (s.mesh.dim() == 3) {
            std::snprintf(stem, sizeof stem, "snapshot_%05zu.obj", s.iteration);
            write_obj(s.mesh, dir / stem);
        } else {
            std::snprintf(stem, sizeof stem, "frame_%05zu.svg", s.iteration);
            write_text(dir / stem, frame_svg(s.mesh, trace.target, "iteration " + std::to_string(s.iteration)));
        }
    }
    write_text(dir / "timeline.csv", timeline_to_csv(timeline_rows(trace)));
    write_text(dir / "losses.csv", losses_to_csv(trace.losses));
}

std::string frame_svg(const Mesh& mesh, const PointSet& target, const std::string& title) {
    constexpr double size = 480.0;
    constexpr double pad = 24.0;
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (const auto& p : mesh.vertices.points()) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    for (const auto& p : target.points()) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double span = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1e-12});
    const double scale = (size - 2 * pad) / span;
    auto sx = [&](const Vec3& p) { return fmt_fixed(pad + (p.x() - lo.x()) * scale); };
    auto sy = [&](const Vec3& p) { return fmt_fixed(size - pad - (p.y() - lo.y()) * scale); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size + 20
        << "\" viewBox=\"0 0 " << size << " " << size + 20 << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << pad << "\" y=\"16\" font-family=\"sans-serif\" font-size=\"13\">" << title
        << "</text>\n<g transform=\"translate(0,20)\">\n";
    for (const auto& p : target.points()) {
        out << "<circle cx=\"" << sx(p) << "\" cy=\"" << sy(p) << "\" r=\"3\" fill=\"#e88fb4\"/>\n";
    }
    out << "<path fill=\"none\" stroke=\"#2b5cd6\" stroke-width=\"1\" d=\"";
    const auto& v = mesh.vertices;
    for (const auto& s : mesh.segments) {
        out << "M" << sx(v[s[0]]) << " " << sy(v[s[0]]) << "L" << sx(v[s[1]]) << " " << sy(v[s[1]]) << " ";
    }
    out << "\"/>\n";
    for (const auto& p : v.points()) {
        out << "<path stroke=\"#6b2f8f\" stroke-width=\"1\" d=\"M" << fmt_fixed(pad + (p.x() - lo.x()) * scale - 3)
            << " " << sy(p) << "h6M" << sx(p) << " " << fmt_fixed(size - pad - (p.y() - lo.y()) * scale - 3)
            << "v6\"/>\n";
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

std::string line_chart_svg(const std::vector<Series>& series, const ChartOptions& opts) {
    static constexpr std::array<const char*, 6> palette{"#1f77b4", "#d62728", "#2ca02c",
                                                        "#9467bd", "#ff7f0e", "#17becf"};
    constexpr double width = 720.0;
    constexpr double height = 440.0;
    constexpr double left = 80.0;
    constexpr double right = 170.0;
    constexpr double top = 40.0;
    constexpr double bottom = 60.0;

    auto tx = [&](double v) { return opts.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return opts.log_y ? std::log10(v) : v; };

    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0;
    double y0 = x0;
    double y1 = -x0;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw InputError("series '" + s.name + "' has mismatched x/y lengths");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if ((opts.log_x && !(s.x[i] > 0)) || (opts.log_y && !(s.y[i] > 0))) {
                throw InputError("series '" + s.name + "' has non-positive values on a log axis");
            }
            x0 = std::min(x0, tx(s.x[i]));
            x1 = std::max(x1, tx(s.x[i]));
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    }
    if (!std::isfinite(x0)) throw InputError("no data rows");
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return top + ph - (ty(v) - y0) / (y1 - y0) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\" font-family=\"sans-serif\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << left << "\" y=\"24\" font-size=\"15\">" << opts.title << "</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#444\"/>\n";

    auto tick_label = [](double v, bool log) { return log ? fmt_double(std::pow(10.0, v)) : fmt_fixed(v, 3); };
    constexpr int ticks = 5;
    for (int k = 0; k <= ticks; ++k) {
        const double fx = x0 + (x1 - x0) * k / ticks;
        const double fy = y0 + (y1 - y0) * k / ticks;
        const double gx = left + pw * k / ticks;
        const double gy = top + ph - ph * k / ticks;
        out << "<text x=\"" << fmt_fixed(gx) << "\" y=\"" << fmt_fixed(top + ph + 18)
            << "\" font-size=\"11\" text-anchor=\"middle\">" << tick_label(fx, opts.log_x) << "</text>\n";
        out << "<text x=\"" << fmt_fixed(left - 6) << "\" y=\"" << fmt_fixed(gy + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">" << tick_label(fy, opts.log_y) << "</text>\n";
    }
    out << "<text x=\"" << fmt_fixed(left + pw / 2) << "\" y=\"" << fmt_fixed(height - 14)
        << "\" font-size=\"12\" text-anchor=\"middle\">" << opts.x_label << (opts.log_x ? " (log)" : "")
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << fmt_fixed(top + ph / 2) << "\" font-size=\"12\" text-anchor=\"middle\""
        << " transform=\"rotate(-90 16 " << fmt_fixed(top + ph / 2) << ")\">" << opts.y_label
        << (opts.log_y ? " (log)" : "") << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = palette[k % palette.size()];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            out << (i ? " " : "") << fmt_fixed(px(s.x[i])) << "," << fmt_fixed(py(s.y[i]));
        }
        out << "\"/>\n";
        const double ly = top + 14 + 18 * static_cast<double>(k);
        out << "<line x1=\"" << fmt_fixed(left + pw + 12) << "\" y1=\"" << fmt_fixed(ly - 4) << "\" x2=\""
            << fmt_fixed(left + pw + 32) << "\" y2=\"" << fmt_fixed(ly - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << fmt_fixed(left + pw + 38) << "\" y=\"" << fmt_fixed(ly) << "\" font-size=\"12\">"
            << s.name << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
    if (!out) throw InputError("write failed for " + path.string());
}

}  // namespace cd2::cli
