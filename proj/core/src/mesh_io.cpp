#include "cd2/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string_view>
#include <vector>

#include "cd2/error.hpp"

namespace cd2 {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path.string(), 0, "cannot open file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        if (sep == ' ') {
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            if (pos >= line.size()) break;
            auto end = pos;
            while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
            out.push_back(line.substr(pos, end - pos));
            pos = end;
        } else {
            auto end = line.find(sep, pos);
            if (end == std::string_view::npos) end = line.size();
            auto field = line.substr(pos, end - pos);
            while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front())))
                field.remove_prefix(1);
            while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back())))
                field.remove_suffix(1);
            out.push_back(field);
            pos = end + 1;
        }
    }
    return out;
}

bool to_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && p == end;
}

double parse_coord(std::string_view s, const std::string& name, std::size_t line) {
    double v = 0.0;
    if (!to_double(s, v)) {
        throw ParseError(name, line, "invalid number '" + std::string(s) + "'");
    }
    if (!std::isfinite(v)) {
        throw ParseError(name, line, "non-finite value '" + std::string(s) + "'");
    }
    return v;
}

long parse_int(std::string_view s, const std::string& name, std::size_t line) {
    long v = 0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) {
        throw ParseError(name, line, "invalid integer '" + std::string(s) + "'");
    }
    return v;
}

template <typename Fn>
void for_each_line(const std::string& text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string_view line(text.data() + pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        fn(line, line_no);
        pos = end + 1;
    }
}

std::string_view strip_comment(std::string_view line) {
    const auto hash = line.find('#');
    return hash == std::string_view::npos ? line : line.substr(0, hash);
}

void fan(const std::vector<Index>& poly, std::vector<Triangle>& out) {
    for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        out.push_back({poly[0], poly[k], poly[k + 1]});
    }
}

void check_faces(const Mesh& mesh, const std::string& name) {
    try {
        mesh.validate();
    } catch (const InputError& e) {
        throw ParseError(name, 0, e.what());
    }
}

PointSet rows_to_points(const std::vector<std::vector<double>>& rows, const std::string& name) {
    if (rows.empty()) {
        throw ParseError(name, 0, "no points");
    }
    const int dim = static_cast<int>(rows.front().size());
    PointSet out(dim);
    for (const auto& r : rows) {
        out.push_back(Vec3(r[0], r[1], dim == 3 ? r[2] : 0.0));
    }
    return out;
}

}  // namespace

Mesh parse_obj(const std::string& text, const std::string& name) {
    std::vector<Vec3> verts;
    std::vector<std::pair<std::vector<long>, std::size_t>> polys;
    std::vector<std::pair<std::vector<long>, std::size_t>> lines;
    for_each_line(text, [&](std::string_view raw, std::size_t line) {
        const auto tok = split(strip_comment(raw), ' ');
        if (tok.empty()) return;
        if (tok[0] == "v") {
            if (tok.size() < 4) throw ParseError(name, line, "vertex needs 3 coordinates");
            verts.emplace_back(parse_coord(tok[1], name, line), parse_coord(tok[2], name, line),
                               parse_coord(tok[3], name, line));
        } else if (tok[0] == "f" || tok[0] == "l") {
            const bool face = tok[0] == "f";
            if (tok.size() < (face ? 4u : 3u)) {
                throw ParseError(name, line, face ? "face needs at least 3 vertices" : "line needs at least 2 vertices");
            }
            std::vector<long> ids;
            for (std::size_t k = 1; k < tok.size(); ++k) {
                const auto slash = tok[k].find('/');
                ids.push_back(parse_int(tok[k].substr(0, slash), name, line));
            }
            (face ? polys : lines).emplace_back(std::move(ids), line);
        }
    });
    if (!polys.empty() && !lines.empty()) {
        throw ParseError(name, lines.front().second, "file mixes face and line records");
    }

    // Line-only files are 2D edge meshes in the z = 0 plane.
    const bool planar = !lines.empty();
    Mesh mesh;
    mesh.vertices = PointSet(planar ? 2 : 3);
    for (const auto& v : verts) {
        if (planar && v.z() != 0.0) throw ParseError(name, 0, "line records need every vertex at z = 0");
        mesh.vertices.push_back(v);
    }

    const auto nv = static_cast<long>(verts.size());
    auto resolve = [&](const std::vector<long>& ids, std::size_t line) {
        std::vector<Index> out;
        for (long id : ids) {
            const long resolved = id < 0 ? nv + id : id - 1;
            if (id == 0 || resolved < 0 || resolved >= nv) {
                throw ParseError(name, line, "face index " + std::to_string(id) + " out of range");
            }
            out.push_back(static_cast<Index>(resolved));
        }
        return out;
    };
    for (const auto& [ids, line] : polys) fan(resolve(ids, line), mesh.triangles);
    for (const auto& [ids, line] : lines) {
        const auto chain = resolve(ids, line);
        for (std::size_t k = 0; k + 1 < chain.size(); ++k) mesh.segments.push_back({chain[k], chain[k + 1]});
    }
    check_faces(mesh, name);
    return mesh;
}

Mesh parse_off(const std::string& text, const std::string& name) {
    std::vector<std::pair<std::vector<std::string_view>, std::size_t>> rows;
    for_each_line(text, [&](std::string_view raw, std::size_t line) {
        auto tok = split(strip_comment(raw), ' ');
        if (!tok.empty()) rows.emplace_back(std::move(tok), line);
    });
    if (rows.empty() || rows[0].first[0].substr(0, 3) != "OFF") {
        throw ParseError(name, rows.empty() ? 0 : rows[0].second, "missing OFF header");
    }
    std::size_t r = 0;
    std::vector<std::string_view> counts(rows[0].first.begin() + 1, rows[0].first.end());
    if (counts.empty()) {
        if (rows.size() < 2) throw ParseError(name, rows[0].second, "missing element counts");
        counts = rows[1].first;
        r = 2;
    } else {
        r = 1;
    }
    const auto count_line = rows[r - 1].second;
    if (counts.size() < 2) throw ParseError(name, count_line, "missing element counts");
    const long nv = parse_int(counts[0], name, count_line);
    const long nf = parse_int(counts[1], name, count_line);
    if (nv < 0 || nf < 0) throw ParseError(name, count_line, "negative element count");
    if (rows.size() < r + static_cast<std::size_t>(nv + nf)) {
        throw ParseError(name, rows.back().second, "unexpected end of file");
    }

    Mesh mesh;
    for (long k = 0; k < nv; ++k, ++r) {
        const auto& [tok, line] = rows[r];
        if (tok.size() < 3) throw ParseError(name, line, "vertex needs 3 coordinates");
        mesh.vertices.push_back(Vec3(parse_coord(tok[0], name, line), parse_coord(tok[1], name, line),
                                     parse_coord(tok[2], name, line)));
    }
    for (long k = 0; k < nf; ++k, ++r) {
        const auto& [tok, line] = rows[r];
        const long arity = parse_int(tok[0], name, line);
        if (arity < 3 || static_cast<long>(tok.size()) < arity + 1) {
            throw ParseError(name, line, "malformed face record");
        }
        std::vector<Index> poly;
        for (long j = 1; j <= arity; ++j) {
            const long id = parse_int(tok[static_cast<std::size_t>(j)], name, line);
            if (id < 0 || id >= nv) {
                throw ParseError(name, line, "face index " + std::to_string(id) + " out of range");
            }
            poly.push_back(static_cast<Index>(id));
        }
        fan(poly, mesh.triangles);
    }
    check_faces(mesh, name);
    return mesh;
}

PointSet parse_xyz(const std::string& text, const std::string& name) {
    std::vector<std::vector<double>> rows;
    for_each_line(text, [&](std::string_view raw, std::size_t line) {
        const auto tok = split(strip_comment(raw), ' ');
        if (tok.empty()) return;
        if (tok.size() != 2 && tok.size() != 3) {
            throw ParseError(name, line, "expected 2 or 3 columns");
        }
        if (!rows.empty() && rows.front().size() != tok.size()) {
            throw ParseError(name, line, "inconsistent column count");
        }
        std::vector<double> row;
        for (auto t : tok) row.push_back(parse_coord(t, name, line));
        rows.push_back(std::move(row));
    });
    return rows_to_points(rows, name);
}

PointSet parse_csv_points(const std::string& text, const std::string& name) {
    std::vector<std::vector<double>> rows;
    bool first = true;
    for_each_line(text, [&](std::string_view raw, std::size_t line) {
        if (raw.find_first_not_of(" \t") == std::string_view::npos) return;
        const auto tok = split(raw, ',');
        const bool header = first;
        first = false;
        if (tok.size() != 2 && tok.size() != 3) {
            throw ParseError(name, line, "expected 2 or 3 columns");
        }
        if (header) {
            double dummy = 0.0;
            if (!to_double(tok[0], dummy)) {
                return;  // column names
            }
        }
        if (!rows.empty() && rows.front().size() != tok.size()) {
            throw ParseError(name, line, "inconsistent column count");
        }
        std::vector<double> row;
        for (auto t : tok) row.push_back(parse_coord(t, name, line));
        rows.push_back(std::move(row));
    });
    return rows_to_points(rows, name);
}

Mesh load_obj(const std::filesystem::path& path) { return parse_obj(read_file(path), path.string()); }
Mesh load_off(const std::filesystem::path& path) { return parse_off(read_file(path), path.string()); }

Mesh load_mesh(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".obj") return load_obj(path);
    if (ext == ".off") return load_off(path);
    throw ParseError(path.string(), 0, "unsupported mesh format '" + ext + "'");
}

PointSet load_xyz(const std::filesystem::path& path) { return parse_xyz(read_file(path), path.string()); }
PointSet load_csv_points(const std::filesystem::path& path) {
    return parse_csv_points(read_file(path), path.string());
}

PointSet load_points(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".csv" ? load_csv_points(path) : load_xyz(path);
}

void write_obj(const Mesh& mesh, std::ostream& out) {
    out << std::setprecision(17);
    for (const auto& p : mesh.vertices.points()) {
        out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
    }
    for (const auto& f : mesh.triangles) {
        out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    }
    for (const auto& s : mesh.segments) {
        out << "l " << s[0] + 1 << ' ' << s[1] + 1 << '\n';
    }
}

void write_obj(const Mesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    write_obj(mesh, out);
}

void write_xyz(const PointSet& points, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << std::setprecision(17);
    for (const auto& p : points.points()) {
        out << p.x() << ' ' << p.y();
        if (points.dim() == 3) out << ' ' << p.z();
        out << '\n';
    }
}

}  // namespace cd2
