#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "lodfill/geometry.hpp"

namespace lodfill {

/// Constraint recovery failures (crossing constraints, duplicate points).
class TriangulationError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

/*
 * 2D constrained Delaunay triangulation.
 *
 * Incremental Bowyer-Watson over a super-triangle, followed by
 * constraint-edge recovery through channel retriangulation and a Lawson
 * legalization pass for the unconstrained edges.  Coordinates are
 * normalized to the unit box internally, so the epsilons below are
 * absolute in normalized space.
 *
 * Interior/exterior classification floods outward from the
 * super-triangle without crossing constrained edges; for a simple
 * closed constraint polygon this is exactly the even-odd interior.
 */
class ConstrainedTriangulation2 {
public:
    ConstrainedTriangulation2(std::vector<Point2> points,
                              const std::vector<std::pair<int, int>>& constraints) {
        input_ = std::move(points);
        normalize();
        build_super();
        for (size_t i = 0; i < input_.size(); ++i) insert_point(static_cast<int>(i));
        for (const auto& [a, b] : constraints) insert_constraint(a, b);
        legalize_all();
        classify();
    }

    const std::vector<Point2>& points() const { return input_; }

    /// Triangles of the triangulation (super-triangle removed), CCW.
    const std::vector<std::array<int, 3>>& triangles() const { return out_all_; }
    /// Triangles inside the constraint boundary, CCW.
    const std::vector<std::array<int, 3>>& interior_triangles() const { return out_interior_; }

    bool has_edge(int a, int b) const {
        if (a > b) std::swap(a, b);
        return edge_set_.count({a, b}) > 0;
    }

    /// Undirected edges of the final triangulation (super removed).
    const std::set<std::pair<int, int>>& edges() const { return edge_set_; }

    bool is_constrained(int a, int b) const {
        if (a > b) std::swap(a, b);
        return constrained_.count({a, b}) > 0;
    }

private:
    struct Tri {
        std::array<int, 3> v;
        bool alive = true;
    };

    static constexpr double kEpsOrient = 1e-12;
    static constexpr double kEpsInCircle = 1e-12;

    const Point2& pt(int i) const { return pts_[i]; }

    void normalize() {
        double lox = 0, loy = 0, ext = 1;
        if (!input_.empty()) {
            lox = loy = std::numeric_limits<double>::infinity();
            double hix = -lox, hiy = -lox;
            for (const auto& p : input_) {
                lox = std::min(lox, p.x);
                loy = std::min(loy, p.y);
                hix = std::max(hix, p.x);
                hiy = std::max(hiy, p.y);
            }
            ext = std::max({hix - lox, hiy - loy, 1e-12});
        }
        pts_.reserve(input_.size() + 3);
        for (const auto& p : input_) {
            pts_.push_back({(p.x - lox) / ext, (p.y - loy) / ext});
        }
        for (size_t i = 0; i < pts_.size(); ++i) {
            for (size_t j = 0; j < i; ++j) {
                if (distance2(pts_[i], pts_[j]) < 1e-12) {
                    throw TriangulationError("cdt: duplicate input points");
                }
            }
        }
    }

    void build_super() {
        super_ = static_cast<int>(pts_.size());
        pts_.push_back({-30.0, -30.0});
        pts_.push_back({62.0, -30.0});
        pts_.push_back({-30.0, 62.0});
        tris_.push_back({{super_, super_ + 1, super_ + 2}, true});
    }

    static double incircle_det(const Point2& a, const Point2& b, const Point2& c,
                               const Point2& d) {
        const double ax = a.x - d.x, ay = a.y - d.y;
        const double bx = b.x - d.x, by = b.y - d.y;
        const double cx = c.x - d.x, cy = c.y - d.y;
        const double a2 = ax * ax + ay * ay;
        const double b2 = bx * bx + by * by;
        const double c2 = cx * cx + cy * cy;
        return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
    }

    bool in_circumcircle(const Tri& t, int p) const {
        return incircle_det(pt(t.v[0]), pt(t.v[1]), pt(t.v[2]), pt(p)) > kEpsInCircle;
    }

    int locate(int p) const {
        for (int ti = static_cast<int>(tris_.size()) - 1; ti >= 0; --ti) {
            const Tri& t = tris_[ti];
            if (!t.alive) continue;
            bool inside = true;
            for (int k = 0; k < 3; ++k) {
                if (orient2d(pt(t.v[k]), pt(t.v[(k + 1) % 3]), pt(p)) < -kEpsOrient) {
                    inside = false;
                    break;
                }
            }
            if (inside) return ti;
        }
        return -1;
    }

    std::map<std::pair<int, int>, std::vector<int>> edge_to_tris() const {
        std::map<std::pair<int, int>, std::vector<int>> m;
        for (int ti = 0; ti < static_cast<int>(tris_.size()); ++ti) {
            if (!tris_[ti].alive) continue;
            for (int k = 0; k < 3; ++k) {
                int a = tris_[ti].v[k], b = tris_[ti].v[(k + 1) % 3];
                if (a > b) std::swap(a, b);
                m[{a, b}].push_back(ti);
            }
        }
        return m;
    }

    void insert_point(int p) {
        const int start = locate(p);
        if (start < 0) throw TriangulationError("cdt: point location failed");

        // cavity: connected triangles whose circumcircle contains p
        auto adj = edge_to_tris();
        std::set<int> cavity{start};
        std::vector<int> stack{start};
        while (!stack.empty()) {
            const int ti = stack.back();
            stack.pop_back();
            for (int k = 0; k < 3; ++k) {
                int a = tris_[ti].v[k], b = tris_[ti].v[(k + 1) % 3];
                if (a > b) std::swap(a, b);
                for (int other : adj[{a, b}]) {
                    if (other == ti || cavity.count(other)) continue;
                    if (in_circumcircle(tris_[other], p)) {
                        cavity.insert(other);
                        stack.push_back(other);
                    }
                }
            }
        }

        // boundary edges of the cavity, oriented as in their triangle
        std::vector<std::pair<int, int>> boundary;
        for (int ti : cavity) {
            for (int k = 0; k < 3; ++k) {
                const int a = tris_[ti].v[k], b = tris_[ti].v[(k + 1) % 3];
                int lo = a, hi = b;
                if (lo > hi) std::swap(lo, hi);
                bool shared_with_cavity = false;
                for (int other : adj[{lo, hi}]) {
                    if (other != ti && cavity.count(other)) shared_with_cavity = true;
                }
                if (!shared_with_cavity) boundary.emplace_back(a, b);
            }
        }
        for (int ti : cavity) tris_[ti].alive = false;
        for (const auto& [a, b] : boundary) {
            if (std::abs(orient2d(pt(a), pt(b), pt(p))) <= kEpsOrient) continue;  // p on edge
            tris_.push_back({{a, b, p}, true});
        }
    }

    bool edge_exists(int a, int b) const {
        for (const Tri& t : tris_) {
            if (!t.alive) continue;
            for (int k = 0; k < 3; ++k) {
                const int u = t.v[k], w = t.v[(k + 1) % 3];
                if ((u == a && w == b) || (u == b && w == a)) return true;
            }
        }
        return false;
    }

    void mark_constrained(int a, int b) {
        if (a > b) std::swap(a, b);
        constrained_.insert({a, b});
    }

    static bool between(const Point2& a, const Point2& b, const Point2& p) {
        return dot2(p - a, b - a) > 0 && dot2(p - b, a - b) > 0;
    }

    void insert_constraint(int a, int b) {
        if (a == b) return;
        if (a < 0 || b < 0 || a >= super_ || b >= super_) {
            throw TriangulationError("cdt: constraint index out of range");
        }
        if (edge_exists(a, b)) {
            mark_constrained(a, b);
            return;
        }

        const Point2& pa = pt(a);
        const Point2& pb = pt(b);
        auto adj = edge_to_tris();

        // first crossed triangle: one incident to `a` whose opposite edge
        // straddles the segment
        int cur = -1, left = -1, right = -1;
        for (int ti = 0; ti < static_cast<int>(tris_.size()); ++ti) {
            const Tri& t = tris_[ti];
            if (!t.alive) continue;
            int k = -1;
            for (int i = 0; i < 3; ++i) {
                if (t.v[i] == a) k = i;
            }
            if (k < 0) continue;
            const int u = t.v[(k + 1) % 3], w = t.v[(k + 2) % 3];
            const double ou = orient2d(pa, pb, pt(u));
            const double ow = orient2d(pa, pb, pt(w));
            if (std::abs(ou) <= kEpsOrient && between(pa, pb, pt(u))) {
                // existing vertex sits on the segment: split the constraint
                insert_constraint(a, u);
                insert_constraint(u, b);
                return;
            }
            if (std::abs(ow) <= kEpsOrient && between(pa, pb, pt(w))) {
                insert_constraint(a, w);
                insert_constraint(w, b);
                return;
            }
            // CCW triangle (a,u,w): the segment exits through edge (u,w)
            // when u is right of a->b and w is left
            if (ou < 0 && ow > 0) {
                cur = ti;
                left = w;
                right = u;
                break;
            }
        }
        if (cur < 0) throw TriangulationError("cdt: could not start constraint walk");

        std::vector<int> crossed{cur};
        std::vector<int> upper{a, left}, lower{a, right};
        for (size_t guard = 0; guard < tris_.size() + 8; ++guard) {
            if (is_constrained(left, right)) {
                throw TriangulationError("cdt: constraint crosses a constrained edge");
            }
            // step across edge (left,right)
            int lo = left, hi = right;
            if (lo > hi) std::swap(lo, hi);
            int nxt = -1;
            for (int other : adj[{lo, hi}]) {
                if (other != crossed.back() && tris_[other].alive) nxt = other;
            }
            if (nxt < 0) throw TriangulationError("cdt: constraint walk left the triangulation");
            crossed.push_back(nxt);
            int c = -1;
            for (int v : tris_[nxt].v) {
                if (v != left && v != right) c = v;
            }
            if (c == b) {
                upper.push_back(b);
                lower.push_back(b);
                break;
            }
            const double oc = orient2d(pa, pb, pt(c));
            if (std::abs(oc) <= kEpsOrient && between(pa, pb, pt(c))) {
                insert_constraint(a, c);
                insert_constraint(c, b);
                return;
            }
            if (oc > 0) {
                upper.push_back(c);
                left = c;
            } else {
                lower.push_back(c);
                right = c;
            }
        }
        if (upper.back() != b) throw TriangulationError("cdt: constraint walk did not terminate");

        for (int ti : crossed) tris_[ti].alive = false;
        // retriangulate both sides of the channel against edge a-b
        std::vector<int> upper_inner(upper.begin() + 1, upper.end() - 1);
        std::vector<int> lower_inner(lower.begin() + 1, lower.end() - 1);
        retriangulate_channel(upper_inner, a, b);
        retriangulate_channel(lower_inner, a, b);
        mark_constrained(a, b);
    }

    // Delaunay retriangulation of the pseudo-polygon between edge (a,b)
    // and the vertex chain, recursing on the chain split at the vertex
    // whose circumcircle with (a,b) is empty.
    void retriangulate_channel(const std::vector<int>& chain, int a, int b) {
        if (chain.empty()) return;
        size_t ci = 0;
        if (chain.size() > 1) {
            for (size_t i = 1; i < chain.size(); ++i) {
                if (incircle_det(pt(a), pt(chain[ci]), pt(b), pt(chain[i])) > kEpsInCircle) {
                    ci = i;
                }
            }
        }
        const int c = chain[ci];
        push_ccw(a, c, b);
        retriangulate_channel({chain.begin(), chain.begin() + ci}, a, c);
        retriangulate_channel({chain.begin() + ci + 1, chain.end()}, c, b);
    }

    void push_ccw(int a, int b, int c) {
        if (orient2d(pt(a), pt(b), pt(c)) < 0) std::swap(b, c);
        tris_.push_back({{a, b, c}, true});
    }

    void legalize_all() {
        for (size_t pass = 0; pass < pts_.size() * pts_.size() + 16; ++pass) {
            auto adj = edge_to_tris();
            bool flipped = false;
            for (const auto& [edge, tris] : adj) {
                if (tris.size() != 2) continue;
                if (constrained_.count(edge)) continue;
                const int t0 = tris[0], t1 = tris[1];
                if (!tris_[t0].alive || !tris_[t1].alive) continue;
                int c0 = -1, c1 = -1;
                for (int v : tris_[t0].v) {
                    if (v != edge.first && v != edge.second) c0 = v;
                }
                for (int v : tris_[t1].v) {
                    if (v != edge.first && v != edge.second) c1 = v;
                }
                if (incircle_det(pt(tris_[t0].v[0]), pt(tris_[t0].v[1]), pt(tris_[t0].v[2]),
                                 pt(c1)) > kEpsInCircle) {
                    // flip only when the union is strictly convex
                    if (orient2d(pt(c0), pt(c1), pt(edge.first)) *
                            orient2d(pt(c0), pt(c1), pt(edge.second)) < 0) {
                        tris_[t0].alive = false;
                        tris_[t1].alive = false;
                        push_ccw(c0, c1, edge.first);
                        push_ccw(c1, c0, edge.second);
                        flipped = true;
                        break;  // adjacency is stale after a flip
                    }
                }
            }
            if (!flipped) break;
        }
    }

    void classify() {
        auto adj = edge_to_tris();
        std::map<int, char> exterior;
        std::vector<int> stack;
        for (int ti = 0; ti < static_cast<int>(tris_.size()); ++ti) {
            if (!tris_[ti].alive) continue;
            for (int v : tris_[ti].v) {
                if (v >= super_) {
                    exterior[ti] = 1;
                    stack.push_back(ti);
                    break;
                }
            }
        }
        while (!stack.empty()) {
            const int ti = stack.back();
            stack.pop_back();
            for (int k = 0; k < 3; ++k) {
                int a = tris_[ti].v[k], b = tris_[ti].v[(k + 1) % 3];
                if (a > b) std::swap(a, b);
                if (constrained_.count({a, b})) continue;
                for (int other : adj[{a, b}]) {
                    if (other != ti && tris_[other].alive && !exterior.count(other)) {
                        exterior[other] = 1;
                        stack.push_back(other);
                    }
                }
            }
        }
        for (int ti = 0; ti < static_cast<int>(tris_.size()); ++ti) {
            const Tri& t = tris_[ti];
            if (!t.alive) continue;
            if (t.v[0] >= super_ || t.v[1] >= super_ || t.v[2] >= super_) continue;
            out_all_.push_back(t.v);
            for (int k = 0; k < 3; ++k) {
                int a = t.v[k], b = t.v[(k + 1) % 3];
                if (a > b) std::swap(a, b);
                edge_set_.insert({a, b});
            }
            if (!exterior.count(ti)) out_interior_.push_back(t.v);
        }
    }

    std::vector<Point2> input_;
    std::vector<Point2> pts_;  // normalized, plus super vertices
    std::vector<Tri> tris_;
    std::set<std::pair<int, int>> constrained_;
    std::set<std::pair<int, int>> edge_set_;
    std::vector<std::array<int, 3>> out_all_;
    std::vector<std::array<int, 3>> out_interior_;
    int super_ = 0;
};

/// Convenience entry point matching the pipeline vocabulary.
inline ConstrainedTriangulation2 cdt(std::vector<Point2> points,
                                     const std::vector<std::pair<int, int>>& constraints) {
    return ConstrainedTriangulation2(std::move(points), constraints);
}

}  // namespace lodfill
