#include "cd2/shapes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <string>

#include "cd2/error.hpp"

namespace cd2 {

Mesh make_icosphere(int subdivisions) {
    if (subdivisions < 0 || subdivisions > 6) {
        throw InputError("icosphere subdivisions must be in [0, 6], got " +
                         std::to_string(subdivisions));
    }
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
        {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
        {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
    };
    for (auto& p : v) p.normalize();

    std::vector<Triangle> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<Index, Index>, Index> midpoint;
        auto mid = [&](Index a, Index b) {
            const auto key = std::minmax(a, b);
            auto [it, inserted] = midpoint.try_emplace(key, static_cast<Index>(v.size()));
            if (inserted) {
                v.push_back((v[a] + v[b]).normalized());
            }
            return it->second;
        };
        std::vector<Triangle> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const Index ab = mid(f[0], f[1]);
            const Index bc = mid(f[1], f[2]);
            const Index ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }

    Mesh mesh;
    mesh.vertices = PointSet(std::move(v), 3);
    mesh.triangles = std::move(faces);
    return mesh;
}

Mesh make_circle_loop(const Vec3& center, double radius, std::size_t n) {
    if (n < 3) {
        throw InputError("circle loop needs at least 3 vertices");
    }
    Mesh mesh;
    mesh.vertices = PointSet(2);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        mesh.vertices.push_back(Vec3(center.x() + radius * std::cos(a),
                                     center.y() + radius * std::sin(a), 0.0));
        mesh.segments.push_back({static_cast<Index>(i), static_cast<Index>((i + 1) % n)});
    }
    return mesh;
}

Chair2d make_chair_2d() {
    // Counter-clockwise outline: rear leg and back post share the outer edge
    // x = -0.45; the seat board spans y in [0.2, 0.4].
    static constexpr std::array<std::array<double, 2>, 10> outline = {{
        {-0.45, -0.50}, {-0.25, -0.50}, {-0.25, 0.20}, {0.25, 0.20}, {0.25, -0.50},
        {0.45, -0.50},  {0.45, 0.40},   {-0.25, 0.40}, {-0.25, 0.95}, {-0.45, 0.95},
    }};
    constexpr std::size_t kPoints = 81;
    constexpr std::size_t kVertices = 80;

    std::array<double, outline.size() + 1> cumulative{};
    for (std::size_t i = 0; i < outline.size(); ++i) {
        const auto& a = outline[i];
        const auto& b = outline[(i + 1) % outline.size()];
        cumulative[i + 1] = cumulative[i] + std::hypot(b[0] - a[0], b[1] - a[1]);
    }
    const double perimeter = cumulative.back();

    Chair2d chair;
    chair.ground_truth = PointSet(2);
    std::size_t edge = 0;
    for (std::size_t k = 0; k < kPoints; ++k) {
        const double s = perimeter * static_cast<double>(k) / static_cast<double>(kPoints);
        while (cumulative[edge + 1] <= s) ++edge;
        const auto& a = outline[edge];
        const auto& b = outline[(edge + 1) % outline.size()];
        const double t = (s - cumulative[edge]) / (cumulative[edge + 1] - cumulative[edge]);
        chair.ground_truth.push_back(
            Vec3(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), 0.0));
    }
    chair.template_mesh = make_circle_loop(chair.ground_truth.centroid(), 0.8, kVertices);
    return chair;
}

Mesh make_box(const Vec3& lo, const Vec3& hi) {
    if (!(lo.array() < hi.array()).all()) throw InputError("box needs lo < hi on every axis");
    Mesh mesh;
    for (int k = 0; k < 8; ++k) {
        mesh.vertices.push_back(Vec3((k & 1) ? hi.x() : lo.x(), (k & 2) ? hi.y() : lo.y(),
                                     (k & 4) ? hi.z() : lo.z()));
    }
    // Outward-facing quads split into two triangles each.
    mesh.triangles = {
        {0, 2, 3}, {0, 3, 1},  // z = lo
        {4, 5, 7}, {4, 7, 6},  // z = hi
        {0, 1, 5}, {0, 5, 4},  // y = lo
        {2, 6, 7}, {2, 7, 3},  // y = hi
        {0, 4, 6}, {0, 6, 2},  // x = lo
        {1, 3, 7}, {1, 7, 5},  // x = hi
    };
    return mesh;
}

PointSet sample_surface(const Mesh& mesh, std::size_t n, std::uint64_t seed) {
    if (mesh.dim() != 3) {
        throw InputError("surface sampling requires a 3D triangle mesh");
    }
    if (n == 0) {
        throw InputError("sample count must be at least 1");
    }
    mesh.validate();

    const auto& v = mesh.vertices;
    std::vector<double> cumulative;
    cumulative.reserve(mesh.triangles.size());
    double total = 0.0;
    for (const auto& f : mesh.triangles) {
        total += 0.5 * (v[f[1]] - v[f[0]]).cross(v[f[2]] - v[f[0]]).norm();
        cumulative.push_back(total);
    }
    if (!(total > 0.0)) {
        throw InputError("cannot sample a mesh with zero total area");
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PointSet out(3);
    for (std::size_t k = 0; k < n; ++k) {
        const double pick = unit(rng) * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
        if (it == cumulative.end()) --it;
        const auto& f = mesh.triangles[static_cast<std::size_t>(it - cumulative.begin())];
        double a = unit(rng);
        double b = unit(rng);
        if (a + b > 1.0) {
            a = 1.0 - a;
            b = 1.0 - b;
        }
        out.push_back(v[f[0]] + a * (v[f[1]] - v[f[0]]) + b * (v[f[2]] - v[f[0]]));
    }
    return out;
}

PointSet sample_unit_sphere(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    PointSet out(3);
    while (out.size() < n) {
        const Vec3 g(gauss(rng), gauss(rng), gauss(rng));
        const double len = g.norm();
        if (len > 1e-12) {
            out.push_back(g / len);
        }
    }
    return out;
}

}  // namespace cd2
