#pragma once

#include <string>
#include <vector>

#include "lodfill/cdt.hpp"
#include "lodfill/config.hpp"
#include "lodfill/holedetect.hpp"
#include "lodfill/spatial_grid.hpp"
#include "lodfill/surface_mesh.hpp"

namespace lodfill {

struct FillResult {
    int ring_size = 0;                  // ring vertices after duplicate collapse
    int faces_added = 0;
    int rejected_degenerate = 0;
    int rejected_self_intersecting = 0;
    int faces_withheld = 0;             // valid faces not inserted (insertion aborted)
    double plane_residual = 0.0;        // max ring-vertex distance to the fill plane
    bool filled = false;                // the whole polygon was patched
    std::string fail_reason;
};

namespace detail {

inline bool segments_intersect_2d(const Point2& a, const Point2& b, const Point2& c,
                                  const Point2& d) {
    constexpr double kEps = 1e-12;
    const double d1 = orient2d(c, d, a);
    const double d2 = orient2d(c, d, b);
    const double d3 = orient2d(a, b, c);
    const double d4 = orient2d(a, b, d);
    if (((d1 > kEps && d2 < -kEps) || (d1 < -kEps && d2 > kEps)) &&
        ((d3 > kEps && d4 < -kEps) || (d3 < -kEps && d4 > kEps))) {
        return true;
    }
    // collinear overlap counts as a fold as well
    auto on_segment = [&](const Point2& p, const Point2& q, const Point2& r) {
        if (std::abs(orient2d(p, q, r)) > kEps) return false;
        return r.x >= std::min(p.x, q.x) - kEps && r.x <= std::max(p.x, q.x) + kEps &&
               r.y >= std::min(p.y, q.y) - kEps && r.y <= std::max(p.y, q.y) + kEps;
    };
    return on_segment(c, d, a) || on_segment(c, d, b) || on_segment(a, b, c) ||
           on_segment(a, b, d);
}

inline bool ring_polygon_is_simple(const std::vector<Point2>& poly) {
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            // adjacent segments share an endpoint by construction
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect_2d(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) {
                return false;
            }
        }
    }
    return true;
}

// Candidate patch face against an existing face: crossing or coplanar
// overlap beyond shared boundary contact.
inline bool face_conflicts(const Triangle3& cand, const Triangle3& face, double min_crossing) {
    if (triangles_cross(cand, face, min_crossing)) return true;
    const Vec3 n = cross(face.b - face.a, face.c - face.a);
    if (norm(n) < 1e-300) return false;
    const Plane pl = Plane::from_point_normal(face.a, n);
    const double d = std::max({point_plane_distance(cand.a, pl), point_plane_distance(cand.b, pl),
                               point_plane_distance(cand.c, pl)});
    if (d > 1e-9) return false;
    return coplanar_overlap_area(face, cand) > 1e-10;
}

}  // namespace detail

/*
 * Fill one closed, ordered hole ring: fit a plane to the ring vertices,
 * project, triangulate with the ring edges as constraints, and lift the
 * interior triangles back onto the original vertices. No vertex is
 * moved or created; projection only decides connectivity.
 *
 * Ring vertices from a common duplicate group collapse to the group
 * representative so the patch has no zero-length constraints. Each
 * candidate face must be non-degenerate and must not cross or overlap
 * existing faces away from shared vertices; patch winding follows the
 * traversal direction of the ring's border half-edges. If inserting the
 * surviving faces would raise the border half-edge count (a rejection
 * punched a hole into the patch), nothing is inserted.
 */
inline FillResult fill_hole(SurfaceMesh& mesh, const BorderRing& ring, const RepairConfig& cfg) {
    FillResult out;
    if (!ring.closed || ring.edges.empty()) {
        out.fail_reason = "ring-not-closed";
        return out;
    }

    // ordered ring vertices, collapsed to duplicate-group representatives
    std::vector<VertexId> seq;
    for (const auto& e : ring.edges) {
        const VertexId rep = mesh.duplicate_group(e.from);
        if (seq.empty() || seq.back() != rep) seq.push_back(rep);
    }
    while (seq.size() > 1 && seq.front() == seq.back()) seq.pop_back();
    const int n = static_cast<int>(seq.size());
    out.ring_size = n;
    if (n < 3) {
        out.fail_reason = "degenerate-ring";
        return out;
    }

    std::vector<Point3> pts;
    pts.reserve(n);
    for (VertexId v : seq) pts.push_back(mesh.point(v));

    Plane plane;
    try {
        plane = fit_plane(pts);
    } catch (const GeometryError&) {
        out.fail_reason = "degenerate-plane";
        return out;
    }
    for (const auto& p : pts) {
        out.plane_residual = std::max(out.plane_residual, point_plane_distance(p, plane));
    }

    std::vector<Point2> poly;
    poly.reserve(n);
    for (const auto& p : pts) poly.push_back(project_to_plane(p, plane));
    if (!detail::ring_polygon_is_simple(poly)) {
        out.fail_reason = "projection-fold";
        return out;
    }

    std::vector<std::pair<int, int>> constraints;
    for (int i = 0; i < n; ++i) constraints.emplace_back(i, (i + 1) % n);
    std::vector<std::array<int, 3>> patch;
    try {
        const auto tess = cdt(poly, constraints);
        patch = tess.interior_triangles();
    } catch (const TriangulationError& e) {
        out.fail_reason = e.what();
        return out;
    }

    // winding: patch half-edges must oppose the existing interior
    // half-edges across the former border, i.e. follow the border
    // half-edge direction
    int follow_votes = 0;
    for (const auto& e : ring.edges) {
        const EdgeId eid = mesh.find_edge(e.from, e.to);
        if (eid == kInvalidId) continue;
        const auto& rec = mesh.edge(eid);
        if (rec.halfedges.size() != 1) continue;
        const Halfedge& inner = mesh.halfedge(rec.halfedges[0]);
        const VertexId border_from = mesh.target(rec.halfedges[0]);
        const VertexId border_to = inner.origin;
        follow_votes += (border_from == e.from && border_to == e.to) ? 1 : -1;
    }
    double signed_area2 = 0.0;
    for (int i = 0; i < n; ++i) signed_area2 += cross2(poly[i], poly[(i + 1) % n]);
    const bool ring_is_ccw = signed_area2 > 0.0;
    const bool follow_ring = follow_votes >= 0;
    const bool flip = follow_ring != ring_is_ccw;  // CDT triangles come out CCW

    // validation against the existing mesh
    SpatialGrid grid(1.0);
    {
        double mean_extent = 0.0;
        std::vector<BBox3> boxes(mesh.face_count());
        for (FaceId f = 0; f < static_cast<FaceId>(mesh.face_count()); ++f) {
            boxes[f] = bbox_of(mesh.face_triangle(f));
            mean_extent += std::max({boxes[f].hi.x - boxes[f].lo.x, boxes[f].hi.y - boxes[f].lo.y,
                                     boxes[f].hi.z - boxes[f].lo.z});
        }
        if (!boxes.empty()) mean_extent /= static_cast<double>(boxes.size());
        grid = SpatialGrid(std::max(mean_extent, 1e-6));
        for (FaceId f = 0; f < static_cast<FaceId>(mesh.face_count()); ++f) {
            grid.insert(f, boxes[f]);
        }
    }

    std::vector<std::array<VertexId, 3>> accepted;
    for (const auto& t : patch) {
        std::array<VertexId, 3> fv{seq[t[0]], seq[t[1]], seq[t[2]]};
        if (flip) std::swap(fv[1], fv[2]);
        const Triangle3 world{mesh.point(fv[0]), mesh.point(fv[1]), mesh.point(fv[2])};
        if (area(world) <= 1e-12) {
            ++out.rejected_degenerate;
            continue;
        }
        bool conflict = false;
        for (int fi : grid.query(bbox_of(world))) {
            const auto& fc = mesh.face(static_cast<FaceId>(fi));
            bool shares_vertex = false;
            for (VertexId a : fv) {
                for (VertexId b : fc) {
                    if (mesh.duplicate_group(a) == mesh.duplicate_group(b)) {
                        shares_vertex = true;
                        break;
                    }
                }
                if (shares_vertex) break;
            }
            if (shares_vertex) continue;
            if (detail::face_conflicts(world, mesh.face_triangle(static_cast<FaceId>(fi)),
                                       cfg.eps_duplicate)) {
                conflict = true;
                break;
            }
        }
        if (conflict) {
            ++out.rejected_self_intersecting;
            continue;
        }
        accepted.push_back(fv);
    }

    if (accepted.empty()) {
        if (out.fail_reason.empty()) out.fail_reason = "all-candidates-rejected";
        return out;
    }

    // partial patches must not create new borders
    const size_t borders_before = mesh.border_halfedge_count();
    {
        SurfaceMesh probe = mesh;
        for (const auto& fv : accepted) probe.add_face(fv[0], fv[1], fv[2]);
        probe.rebuild_connectivity();
        if (probe.border_halfedge_count() > borders_before) {
            out.faces_withheld = static_cast<int>(accepted.size());
            out.fail_reason = "partial-fill-would-increase-borders";
            return out;
        }
    }

    for (const auto& fv : accepted) mesh.add_face(fv[0], fv[1], fv[2]);
    mesh.rebuild_connectivity();
    out.faces_added = static_cast<int>(accepted.size());
    out.filled = out.rejected_degenerate == 0 && out.rejected_self_intersecting == 0;
    if (!out.filled && out.fail_reason.empty()) out.fail_reason = "partial-fill";
    return out;
}

/// Fill every true hole, in ascending order of each ring's lowest
/// vertex id. Per-hole failures are carried in the results.
inline std::vector<FillResult> fill_all(SurfaceMesh& mesh, const HoleSet& holes,
                                        const RepairConfig& cfg) {
    std::vector<size_t> order(holes.true_holes.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto lowest = [&](size_t i) {
        VertexId lo = holes.true_holes[i].edges.empty() ? kInvalidId
                                                        : holes.true_holes[i].edges[0].from;
        for (const auto& e : holes.true_holes[i].edges) lo = std::min({lo, e.from, e.to});
        return lo;
    };
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return lowest(a) < lowest(b); });

    std::vector<FillResult> out;
    out.reserve(order.size());
    for (size_t i : order) out.push_back(fill_hole(mesh, holes.true_holes[i], cfg));
    return out;
}

}  // namespace lodfill
