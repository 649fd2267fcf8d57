#include "cd2/intersect.hpp"

#include <algorithm>
#include <cmath>

namespace cd2 {

namespace {

double snap(double d) { return std::abs(d) < kOrientEps ? 0.0 : d; }

// Drops the coordinate where `normal` is largest, leaving a 2D point in xy.
struct Projector {
    int u = 0;
    int v = 1;
    explicit Projector(const Vec3& normal) {
        int drop = 0;
        normal.cwiseAbs().maxCoeff(&drop);
        u = (drop + 1) % 3;
        v = (drop + 2) % 3;
    }
    Vec3 operator()(const Vec3& p) const { return {p[u], p[v], 0.0}; }
};

bool on_segment_2d(const Vec3& a, const Vec3& b, const Vec3& p) {
    return std::min(a.x(), b.x()) - kOrientEps <= p.x() && p.x() <= std::max(a.x(), b.x()) + kOrientEps &&
           std::min(a.y(), b.y()) - kOrientEps <= p.y() && p.y() <= std::max(a.y(), b.y()) + kOrientEps;
}

// Closed segments, 2D.
bool segments_touch_2d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    const double o1 = snap(orient2d(a, b, c));
    const double o2 = snap(orient2d(a, b, d));
    const double o3 = snap(orient2d(c, d, a));
    const double o4 = snap(orient2d(c, d, b));
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    if (o1 == 0 && on_segment_2d(a, b, c)) return true;
    if (o2 == 0 && on_segment_2d(a, b, d)) return true;
    if (o3 == 0 && on_segment_2d(c, d, a)) return true;
    if (o4 == 0 && on_segment_2d(c, d, b)) return true;
    return false;
}

// Closed, non-degenerate 2D triangle.
bool point_in_triangle_2d(const Vec3& p, const Tri3& t) {
    const double d0 = snap(orient2d(t[0], t[1], p));
    const double d1 = snap(orient2d(t[1], t[2], p));
    const double d2 = snap(orient2d(t[2], t[0], p));
    const bool has_neg = d0 < 0 || d1 < 0 || d2 < 0;
    const bool has_pos = d0 > 0 || d1 > 0 || d2 > 0;
    return !(has_neg && has_pos);
}

bool triangles_overlap_2d(const Tri3& a, const Tri3& b) {
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (segments_touch_2d(a[i], a[(i + 1) % 3], b[j], b[(j + 1) % 3])) return true;
        }
    }
    return point_in_triangle_2d(a[0], b) || point_in_triangle_2d(b[0], a);
}

bool coplanar_overlap(const Tri3& a, const Tri3& b, const Vec3& normal) {
    const Projector proj(normal);
    const Tri3 a2{proj(a[0]), proj(a[1]), proj(a[2])};
    const Tri3 b2{proj(b[0]), proj(b[1]), proj(b[2])};
    return triangles_overlap_2d(a2, b2);
}

// Returns true when the supplied canonical configuration overlaps: p1 is
// alone on its side of T2's plane and p2 alone on its side of T1's plane.
bool check_min_max(const Vec3& p1, const Vec3& q1, const Vec3& r1, const Vec3& p2, const Vec3& q2,
                   const Vec3& r2) {
    if (snap((q2 - q1).dot((p2 - q1).cross(p1 - q1))) > 0.0) return false;
    if (snap((r2 - p1).dot((p2 - p1).cross(r1 - p1))) > 0.0) return false;
    return true;
}

// Canonical permutation of T2's vertices given their signed distances to T1.
bool tri_tri_canonical(const Vec3& p1, const Vec3& q1, const Vec3& r1, const Vec3& p2,
                       const Vec3& q2, const Vec3& r2, double dp2, double dq2, double dr2,
                       const Tri3& a, const Tri3& b, const Vec3& n1) {
    if (dp2 > 0) {
        if (dq2 > 0) return check_min_max(p1, r1, q1, r2, p2, q2);
        if (dr2 > 0) return check_min_max(p1, r1, q1, q2, r2, p2);
        return check_min_max(p1, q1, r1, p2, q2, r2);
    }
    if (dp2 < 0) {
        if (dq2 < 0) return check_min_max(p1, q1, r1, r2, p2, q2);
        if (dr2 < 0) return check_min_max(p1, q1, r1, q2, r2, p2);
        return check_min_max(p1, r1, q1, p2, q2, r2);
    }
    if (dq2 < 0) {
        if (dr2 >= 0) return check_min_max(p1, r1, q1, q2, r2, p2);
        return check_min_max(p1, q1, r1, p2, q2, r2);
    }
    if (dq2 > 0) {
        if (dr2 > 0) return check_min_max(p1, r1, q1, p2, q2, r2);
        return check_min_max(p1, q1, r1, q2, r2, p2);
    }
    if (dr2 > 0) return check_min_max(p1, q1, r1, r2, p2, q2);
    if (dr2 < 0) return check_min_max(p1, r1, q1, r2, p2, q2);
    return coplanar_overlap(a, b, n1);
}

// Closest distance between closed 3D segments [p0,p1] and [q0,q1].
double segment_segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
    const Vec3 d1 = p1 - p0;
    const Vec3 d2 = q1 - q0;
    const Vec3 r = p0 - q0;
    const double a = d1.squaredNorm();
    const double e = d2.squaredNorm();
    const double f = d2.dot(r);
    double s = 0.0;
    double t = 0.0;
    if (a <= 0.0 && e <= 0.0) return r.norm();
    if (a <= 0.0) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = d1.dot(r);
        if (e <= 0.0) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = d1.dot(d2);
            const double denom = a * e - b * b;
            s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return ((p0 + s * d1) - (q0 + t * d2)).norm();
}

// Closed segment against a closed non-degenerate triangle.
bool segment_triangle(const Vec3& s0, const Vec3& s1, const Tri3& t) {
    const double d0 = snap(orient3d(t[0], t[1], t[2], s0));
    const double d1 = snap(orient3d(t[0], t[1], t[2], s1));
    if (d0 * d1 > 0) return false;
    const Projector proj((t[1] - t[0]).cross(t[2] - t[0]));
    const Tri3 t2{proj(t[0]), proj(t[1]), proj(t[2])};
    if (d0 == 0 && d1 == 0) {
        const Vec3 a = proj(s0);
        const Vec3 b = proj(s1);
        if (point_in_triangle_2d(a, t2) || point_in_triangle_2d(b, t2)) return true;
        for (int j = 0; j < 3; ++j) {
            if (segments_touch_2d(a, b, t2[j], t2[(j + 1) % 3])) return true;
        }
        return false;
    }
    const Vec3 hit = d0 == d1 ? s0 : Vec3(s0 + (d0 / (d0 - d1)) * (s1 - s0));
    return point_in_triangle_2d(proj(hit), t2);
}

struct Extent {
    Vec3 a;
    Vec3 b;
};

// Longest edge of a zero-area triangle; a point collapses to a zero-length segment.
Extent collapse(const Tri3& t) {
    Extent best{t[0], t[1]};
    double len = (t[1] - t[0]).squaredNorm();
    for (int i = 1; i < 3; ++i) {
        const double l = (t[(i + 1) % 3] - t[i]).squaredNorm();
        if (l > len) {
            len = l;
            best = {t[i], t[(i + 1) % 3]};
        }
    }
    return best;
}

}  // namespace

double orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    return (a - d).dot((b - d).cross(c - d));
}

double orient2d(const Vec3& a, const Vec3& b, const Vec3& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

bool tri_tri_intersect(const Tri3& a, const Tri3& b) {
    const auto& [p1, q1, r1] = a;
    const auto& [p2, q2, r2] = b;

    const Vec3 n1 = (q1 - p1).cross(r1 - p1);
    const Vec3 n2 = (p2 - r2).cross(q2 - r2);
    const bool a_flat = n1.norm() < kOrientEps;
    const bool b_flat = n2.norm() < kOrientEps;
    if (a_flat || b_flat) {
        if (a_flat && b_flat) {
            const auto ea = collapse(a);
            const auto eb = collapse(b);
            return segment_segment_distance(ea.a, ea.b, eb.a, eb.b) < kOrientEps;
        }
        const auto e = collapse(a_flat ? a : b);
        return segment_triangle(e.a, e.b, a_flat ? b : a);
    }

    // Signed distances of T1's vertices to T2's plane.
    const double dp1 = snap((p1 - r2).dot(n2));
    const double dq1 = snap((q1 - r2).dot(n2));
    const double dr1 = snap((r1 - r2).dot(n2));
    if (dp1 * dq1 > 0 && dp1 * dr1 > 0) return false;

    const double dp2 = snap((p2 - r1).dot(n1));
    const double dq2 = snap((q2 - r1).dot(n1));
    const double dr2 = snap((r2 - r1).dot(n1));
    if (dp2 * dq2 > 0 && dp2 * dr2 > 0) return false;

    auto canon = [&](const Vec3& x1, const Vec3& y1, const Vec3& z1, const Vec3& x2, const Vec3& y2,
                     const Vec3& z2, double dx, double dy, double dz) {
        return tri_tri_canonical(x1, y1, z1, x2, y2, z2, dx, dy, dz, a, b, n1);
    };

    // Rotate T1 so that p1 is alone on its side of T2's plane.
    if (dp1 > 0) {
        if (dq1 > 0) return canon(r1, p1, q1, p2, r2, q2, dp2, dr2, dq2);
        if (dr1 > 0) return canon(q1, r1, p1, p2, r2, q2, dp2, dr2, dq2);
        return canon(p1, q1, r1, p2, q2, r2, dp2, dq2, dr2);
    }
    if (dp1 < 0) {
        if (dq1 < 0) return canon(r1, p1, q1, p2, q2, r2, dp2, dq2, dr2);
        if (dr1 < 0) return canon(q1, r1, p1, p2, q2, r2, dp2, dq2, dr2);
        return canon(p1, q1, r1, p2, r2, q2, dp2, dr2, dq2);
    }
    if (dq1 < 0) {
        if (dr1 >= 0) return canon(q1, r1, p1, p2, r2, q2, dp2, dr2, dq2);
        return canon(p1, q1, r1, p2, q2, r2, dp2, dq2, dr2);
    }
    if (dq1 > 0) {
        if (dr1 > 0) return canon(p1, q1, r1, p2, r2, q2, dp2, dr2, dq2);
        return canon(q1, r1, p1, p2, q2, r2, dp2, dq2, dr2);
    }
    if (dr1 > 0) return canon(r1, p1, q1, p2, q2, r2, dp2, dq2, dr2);
    if (dr1 < 0) return canon(r1, p1, q1, p2, r2, q2, dp2, dr2, dq2);
    return coplanar_overlap(a, b, n1);
}

bool segments_cross_2d(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
    const double o1 = snap(orient2d(a0, a1, b0));
    const double o2 = snap(orient2d(a0, a1, b1));
    const double o3 = snap(orient2d(b0, b1, a0));
    const double o4 = snap(orient2d(b0, b1, a1));
    return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace cd2
