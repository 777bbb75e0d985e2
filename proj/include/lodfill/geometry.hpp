#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace lodfill {

// Thrown when an operation receives geometry it cannot work with
// (coincident points, collinear plane fits, ...).
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Point3 {
    double x{0.0}, y{0.0}, z{0.0};

    Point3() = default;
    Point3(double px, double py, double pz) : x(px), y(py), z(pz) {}

    Point3 operator+(const Point3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Point3 operator-(const Point3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Point3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Point3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Point3& operator+=(const Point3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    bool operator==(const Point3& o) const { return x == o.x && y == o.y && z == o.z; }
};

using Vec3 = Point3;

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double squared_norm(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(squared_norm(a)); }
inline double distance(const Point3& a, const Point3& b) { return norm(a - b); }

inline Vec3 normalized(const Vec3& a) {
    const double n = norm(a);
    if (n == 0.0) throw GeometryError("cannot normalize zero vector");
    return a / n;
}

inline bool is_finite(const Point3& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

struct Point2 {
    double x{0.0}, y{0.0};

    Point2() = default;
    Point2(double px, double py) : x(px), y(py) {}

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Point2& o) const { return x == o.x && y == o.y; }
};

inline double cross2(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double dot2(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double distance2(const Point2& a, const Point2& b) {
    const Point2 d = a - b;
    return std::sqrt(d.x * d.x + d.y * d.y);
}

/// Triangle in plane coordinates (meters).
struct Triangle2 {
    Point2 a, b, c;
};

/// Triangle in world coordinates.
struct Triangle3 {
    Point3 a, b, c;
};

inline double signed_area(const Triangle2& t) {
    return 0.5 * cross2(t.b - t.a, t.c - t.a);
}

inline double area(const Triangle2& t) { return std::abs(signed_area(t)); }

inline double area(const Triangle3& t) {
    return 0.5 * norm(cross(t.b - t.a, t.c - t.a));
}

// Orientation of c relative to directed line a->b: >0 left, <0 right.
inline double orient2d(const Point2& a, const Point2& b, const Point2& c) {
    return cross2(b - a, c - a);
}

/*
 * An oriented plane together with an in-plane orthonormal frame.
 *
 * Points p on the plane satisfy dot(normal, p) == offset.  The (u, v)
 * basis is what project_to_plane / lift_from_plane use, so 2D
 * coordinates produced by one plane object are only meaningful with
 * that same object.
 */
struct Plane {
    Vec3 normal;     // unit length
    double offset{0.0};  // signed distance of the plane from the origin, meters
    Vec3 u, v;       // in-plane orthonormal basis, right-handed with normal

    static Plane from_point_normal(const Point3& p, const Vec3& n) {
        Plane pl;
        pl.normal = normalized(n);
        pl.offset = dot(pl.normal, p);
        pl.build_basis();
        return pl;
    }

    // Deterministic basis: pick the world axis least aligned with the normal.
    void build_basis() {
        const double ax = std::abs(normal.x), ay = std::abs(normal.y), az = std::abs(normal.z);
        Vec3 axis{1.0, 0.0, 0.0};
        if (ay <= ax && ay <= az) axis = {0.0, 1.0, 0.0};
        else if (az <= ax && az <= ay) axis = {0.0, 0.0, 1.0};
        u = normalized(cross(normal, axis));
        v = cross(normal, u);
    }

    Point3 origin_point() const { return normal * offset; }
};

inline double point_plane_distance(const Point3& p, const Plane& pl) {
    return std::abs(dot(pl.normal, p) - pl.offset);
}

inline double signed_plane_distance(const Point3& p, const Plane& pl) {
    return dot(pl.normal, p) - pl.offset;
}

inline Point2 project_to_plane(const Point3& p, const Plane& pl) {
    const Point3 d = p - pl.origin_point();
    return {dot(d, pl.u), dot(d, pl.v)};
}

inline Point3 lift_from_plane(const Point2& q, const Plane& pl) {
    return pl.origin_point() + pl.u * q.x + pl.v * q.y;
}

/*
 * Orthogonal least-squares plane through a point set: the normal is the
 * eigenvector of the centered covariance with the smallest eigenvalue.
 * Ties in the smallest eigenvalue are broken by the lexicographically
 * smallest unit normal; the final sign makes the first non-degenerate
 * input triple counter-clockwise when projected.
 *
 * Throws GeometryError when the points are coincident or collinear.
 */
inline Plane fit_plane(std::span<const Point3> points) {
    if (points.size() < 3) throw GeometryError("fit_plane: need at least 3 points");

    Point3 centroid{0.0, 0.0, 0.0};
    for (const auto& p : points) centroid += p;
    centroid = centroid / static_cast<double>(points.size());

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& p : points) {
        const Vec3 d = p - centroid;
        Eigen::Vector3d e(d.x, d.y, d.z);
        cov += e * e.transpose();
    }

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
    const Eigen::Vector3d evals = solver.eigenvalues();  // ascending
    const double scale = std::max(evals[2], 1e-300);
    if (evals[1] <= scale * 1e-14) {
        throw GeometryError("fit_plane: points are collinear or coincident");
    }

    auto canonical = [](Eigen::Vector3d n) {
        // sign-normalize so equal directions compare equal
        if (n[0] < 0 || (n[0] == 0 && (n[1] < 0 || (n[1] == 0 && n[2] < 0)))) n = -n;
        return n;
    };

    Eigen::Vector3d n = canonical(solver.eigenvectors().col(0));
    if (evals[1] - evals[0] <= scale * 1e-12) {
        // degenerate pair of small eigenvalues: pick the lexicographically
        // smallest of the two candidate normals
        Eigen::Vector3d alt = canonical(solver.eigenvectors().col(1));
        if (std::lexicographical_compare(alt.data(), alt.data() + 3, n.data(), n.data() + 3)) {
            n = alt;
        }
    }

    Vec3 normal{n[0], n[1], n[2]};
    normal = normalized(normal);

    // orient by the first non-degenerate triple
    for (size_t i = 0; i + 2 < points.size(); ++i) {
        const Vec3 c = cross(points[i + 1] - points[i], points[i + 2] - points[i]);
        if (norm(c) > 1e-12) {
            if (dot(c, normal) < 0.0) normal = normal * -1.0;
            break;
        }
    }

    Plane pl;
    pl.normal = normal;
    pl.offset = dot(normal, centroid);
    pl.build_basis();
    return pl;
}

inline double fit_plane_residual(std::span<const Point3> points, const Plane& pl) {
    double sum = 0.0;
    for (const auto& p : points) {
        const double d = signed_plane_distance(p, pl);
        sum += d * d;
    }
    return sum;
}

namespace detail {

// Sutherland-Hodgman clip of polygon `poly` against half-plane left of a->b.
inline std::vector<Point2> clip_halfplane(const std::vector<Point2>& poly,
                                          const Point2& a, const Point2& b) {
    std::vector<Point2> out;
    const size_t n = poly.size();
    out.reserve(n + 2);
    for (size_t i = 0; i < n; ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % n];
        const double dp = orient2d(a, b, p);
        const double dq = orient2d(a, b, q);
        if (dp >= 0.0) {
            out.push_back(p);
            if (dq < 0.0) {
                const double t = dp / (dp - dq);
                out.push_back(p + (q - p) * t);
            }
        } else if (dq >= 0.0) {
            const double t = dp / (dp - dq);
            out.push_back(p + (q - p) * t);
        }
    }
    return out;
}

inline double polygon_area(const std::vector<Point2>& poly) {
    double s = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % poly.size()];
        s += cross2(p, q);
    }
    return 0.5 * std::abs(s);
}

}  // namespace detail

/// Area of the convex intersection of two triangles, by successive
/// half-plane clipping. Zero when disjoint or when either is degenerate.
inline double triangle_overlap_area(const Triangle2& ta, const Triangle2& tb) {
    constexpr double kDegenerate = 1e-300;
    if (area(ta) <= kDegenerate || area(tb) <= kDegenerate) return 0.0;

    Triangle2 b = tb;
    if (signed_area(b) < 0.0) std::swap(b.b, b.c);  // make CCW

    std::vector<Point2> poly{ta.a, ta.b, ta.c};
    if (signed_area(ta) < 0.0) std::swap(poly[1], poly[2]);

    poly = detail::clip_halfplane(poly, b.a, b.b);
    if (poly.size() < 3) return 0.0;
    poly = detail::clip_halfplane(poly, b.b, b.c);
    if (poly.size() < 3) return 0.0;
    poly = detail::clip_halfplane(poly, b.c, b.a);
    if (poly.size() < 3) return 0.0;
    return detail::polygon_area(poly);
}

struct Segment3 {
    Point3 a, b;
    double length() const { return distance(a, b); }
    Point3 midpoint() const { return (a + b) * 0.5; }
};

namespace detail {

// Intersection of triangle `t` with the plane `pl`, as a segment on the
// plane. Empty when the triangle does not cross the plane (or only
// touches it within eps).
inline std::optional<Segment3> triangle_plane_section(const Triangle3& t, const Plane& pl,
                                                      double eps) {
    const std::array<Point3, 3> v{t.a, t.b, t.c};
    std::array<double, 3> d;
    for (int i = 0; i < 3; ++i) d[i] = signed_plane_distance(v[i], pl);

    std::vector<Point3> pts;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        if (std::abs(d[i]) <= eps) {
            pts.push_back(v[i]);
            continue;
        }
        if ((d[i] > eps && d[j] < -eps) || (d[i] < -eps && d[j] > eps)) {
            const double tpar = d[i] / (d[i] - d[j]);
            pts.push_back(v[i] + (v[j] - v[i]) * tpar);
        }
    }
    // dedupe
    std::vector<Point3> uniq;
    for (const auto& p : pts) {
        bool dup = false;
        for (const auto& q : uniq) {
            if (distance(p, q) <= eps) { dup = true; break; }
        }
        if (!dup) uniq.push_back(p);
    }
    if (uniq.size() < 2) return std::nullopt;
    return Segment3{uniq[0], uniq[1]};
}

}  // namespace detail

/*
 * Intersection segment of two non-coplanar triangles. Returns the part
 * of the line-of-intersection common to both triangles, or nullopt when
 * they do not cross (including the coplanar case, which has no segment).
 */
inline std::optional<Segment3> triangle_intersection_segment(const Triangle3& ta,
                                                             const Triangle3& tb,
                                                             double eps = 1e-9) {
    const Vec3 na = cross(ta.b - ta.a, ta.c - ta.a);
    const Vec3 nb = cross(tb.b - tb.a, tb.c - tb.a);
    if (norm(na) < 1e-300 || norm(nb) < 1e-300) return std::nullopt;
    if (norm(cross(normalized(na), normalized(nb))) < 1e-9) return std::nullopt;  // parallel/coplanar

    const Plane pa = Plane::from_point_normal(ta.a, na);
    const Plane pb = Plane::from_point_normal(tb.a, nb);

    auto sa = detail::triangle_plane_section(ta, pb, eps);
    auto sb = detail::triangle_plane_section(tb, pa, eps);
    if (!sa || !sb) return std::nullopt;

    // both segments lie on the same line; intersect their parameter ranges
    const Vec3 dir = normalized(cross(pa.normal, pb.normal));
    const Point3 ref = sa->a;
    double a0 = 0.0, a1 = dot(sa->b - ref, dir);
    double b0 = dot(sb->a - ref, dir), b1 = dot(sb->b - ref, dir);
    if (a0 > a1) std::swap(a0, a1);
    if (b0 > b1) std::swap(b0, b1);
    const double lo = std::max(a0, b0);
    const double hi = std::min(a1, b1);
    if (hi - lo <= eps) return std::nullopt;
    return Segment3{ref + dir * lo, ref + dir * hi};
}

/// Overlap area of two (roughly) coplanar triangles, measured in the
/// supporting plane of `ta`.
inline double coplanar_overlap_area(const Triangle3& ta, const Triangle3& tb) {
    const Vec3 na = cross(ta.b - ta.a, ta.c - ta.a);
    if (norm(na) < 1e-300) return 0.0;
    const Plane pl = Plane::from_point_normal(ta.a, na);
    const Triangle2 a2{project_to_plane(ta.a, pl), project_to_plane(ta.b, pl),
                       project_to_plane(ta.c, pl)};
    const Triangle2 b2{project_to_plane(tb.a, pl), project_to_plane(tb.b, pl),
                       project_to_plane(tb.c, pl)};
    return triangle_overlap_area(a2, b2);
}

/// Distance from point p to the triangle boundary (its three edges), in 3D.
inline double point_triangle_boundary_distance(const Point3& p, const Triangle3& t) {
    const std::array<std::pair<Point3, Point3>, 3> edges{{{t.a, t.b}, {t.b, t.c}, {t.c, t.a}}};
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : edges) {
        const Vec3 ab = b - a;
        const double len2 = squared_norm(ab);
        double tpar = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
        tpar = std::clamp(tpar, 0.0, 1.0);
        best = std::min(best, distance(p, a + ab * tpar));
    }
    return best;
}

/*
 * True when two triangles genuinely cross: their intersection segment is
 * longer than `min_length` and its midpoint is clear of both triangle
 * boundaries, so shared edges, T-contacts and touching corners do not
 * count.
 */
inline bool triangles_cross(const Triangle3& ta, const Triangle3& tb, double min_length,
                            double boundary_clearance = 1e-9) {
    const auto seg = triangle_intersection_segment(ta, tb);
    if (!seg || seg->length() <= min_length) return false;
    const Point3 m = seg->midpoint();
    return point_triangle_boundary_distance(m, ta) > boundary_clearance &&
           point_triangle_boundary_distance(m, tb) > boundary_clearance;
}

struct BBox3 {
    Point3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity()};
    Point3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
              -std::numeric_limits<double>::infinity()};

    void expand(const Point3& p) {
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
    }
    void expand(const BBox3& b) { expand(b.lo); expand(b.hi); }
    void pad(double e) { lo.x -= e; lo.y -= e; lo.z -= e; hi.x += e; hi.y += e; hi.z += e; }
    bool overlaps(const BBox3& o) const {
        return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y && o.lo.y <= hi.y &&
               lo.z <= o.hi.z && o.lo.z <= hi.z;
    }
    bool valid() const { return lo.x <= hi.x; }
};

inline BBox3 bbox_of(const Triangle3& t) {
    BBox3 b;
    b.expand(t.a); b.expand(t.b); b.expand(t.c);
    return b;
}

}  // namespace lodfill
