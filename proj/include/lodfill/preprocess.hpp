#pragma once

#include <map>
#include <set>
#include <vector>

#include "lodfill/cdt.hpp"
#include "lodfill/config.hpp"
#include "lodfill/kdtree.hpp"
#include "lodfill/spatial_grid.hpp"
#include "lodfill/surface_mesh.hpp"

namespace lodfill {

struct DuplicateGroups {
    std::vector<VertexId> group_of;  // per vertex: lowest id of its group
    int nontrivial_groups = 0;       // groups with more than one member
    int grouped_vertices = 0;        // vertices living in such groups
};

struct OverlapMarks {
    int degenerate = 0;
    int same_endpoints = 0;
    int collinear_distinct = 0;
};

struct PreprocessReport {
    int self_intersection_pairs = 0;
    int faces_remeshed = 0;
    int remesh_faces_added = 0;
    int degenerate_subtriangles_discarded = 0;
    int stitched_pairs = 0;
    int stitch_ambiguities = 0;
    DuplicateGroups duplicates;
    OverlapMarks overlaps;
};

namespace detail {

class UnionFind {
public:
    explicit UnionFind(size_t n) : parent_(n) {
        for (size_t i = 0; i < n; ++i) parent_[i] = static_cast<int>(i);
    }
    int find(int a) {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);  // keep the lowest id as root
        parent_[b] = a;
    }

private:
    std::vector<int> parent_;
};

}  // namespace detail

/*
 * Single-linkage duplicate grouping: vertices within eps_duplicate of
 * each other end up in one group, keyed by the lowest member id. Marks
 * are stored on the mesh for the later phases.
 */
inline DuplicateGroups mark_duplicates(SurfaceMesh& mesh, const RepairConfig& cfg) {
    const size_t n = mesh.vertex_count();
    detail::UnionFind uf(n);
    const KdTree3 tree(mesh.points());
    for (VertexId v = 0; v < static_cast<VertexId>(n); ++v) {
        for (int w : tree.radius_search(mesh.point(v), cfg.eps_duplicate)) {
            uf.unite(v, w);
        }
    }
    DuplicateGroups out;
    out.group_of.resize(n);
    std::map<int, int> size_of;
    for (VertexId v = 0; v < static_cast<VertexId>(n); ++v) {
        out.group_of[v] = uf.find(v);
        mesh.set_duplicate_group(v, out.group_of[v]);
        ++size_of[out.group_of[v]];
    }
    for (const auto& [rep, size] : size_of) {
        if (size > 1) {
            ++out.nontrivial_groups;
            out.grouped_vertices += size;
        }
    }
    mesh.refresh_group_members();
    return out;
}

/*
 * Classify every edge as degenerate (endpoints in one duplicate group),
 * same-endpoints (another edge spans the same two groups), or
 * collinear-distinct (collinear within eps_duplicate with
 * more than eps_duplicate of shared extent but different endpoints).
 * Partner edges are recorded for ring completion.
 */
inline OverlapMarks mark_overlapping_edges(SurfaceMesh& mesh, const RepairConfig& cfg) {
    if (mesh.needs_rebuild()) mesh.rebuild_connectivity();
    OverlapMarks out;
    const EdgeId ne = static_cast<EdgeId>(mesh.edge_count());
    for (EdgeId e = 0; e < ne; ++e) {
        mesh.edge(e).mark = OverlapClass::None;
        mesh.edge(e).overlap_partners.clear();
    }

    // degenerate edges
    for (EdgeId e = 0; e < ne; ++e) {
        auto& rec = mesh.edge(e);
        if (mesh.duplicate_group(rec.a) == mesh.duplicate_group(rec.b)) {
            rec.mark = OverlapClass::Degenerate;
            ++out.degenerate;
        }
    }

    // same endpoint groups
    std::map<std::pair<VertexId, VertexId>, std::vector<EdgeId>> buckets;
    for (EdgeId e = 0; e < ne; ++e) {
        const auto& rec = mesh.edge(e);
        if (rec.mark == OverlapClass::Degenerate) continue;
        VertexId ga = mesh.duplicate_group(rec.a), gb = mesh.duplicate_group(rec.b);
        if (ga > gb) std::swap(ga, gb);
        buckets[{ga, gb}].push_back(e);
    }
    for (const auto& [key, edges] : buckets) {
        if (edges.size() < 2) continue;
        for (EdgeId e : edges) {
            mesh.edge(e).mark = OverlapClass::SameEndpoints;
            ++out.same_endpoints;
            for (EdgeId f : edges) {
                if (f != e) mesh.edge(e).overlap_partners.push_back(f);
            }
        }
    }

    // collinear with overlapping extent
    double mean_len = 0.0;
    for (EdgeId e = 0; e < ne; ++e) {
        mean_len += distance(mesh.point(mesh.edge(e).a), mesh.point(mesh.edge(e).b));
    }
    mean_len = ne > 0 ? mean_len / ne : 1.0;
    SpatialGrid grid(std::max(mean_len, cfg.eps_duplicate));
    for (EdgeId e = 0; e < ne; ++e) {
        BBox3 box;
        box.expand(mesh.point(mesh.edge(e).a));
        box.expand(mesh.point(mesh.edge(e).b));
        box.pad(cfg.eps_duplicate);
        grid.insert(e, box);
    }
    auto collinear_overlapping = [&](EdgeId e, EdgeId f) {
        const auto& re = mesh.edge(e);
        const auto& rf = mesh.edge(f);
        const Point3 a = mesh.point(re.a), b = mesh.point(re.b);
        const Point3 c = mesh.point(rf.a), d = mesh.point(rf.b);
        const double len = distance(a, b);
        if (len <= cfg.eps_duplicate) return false;
        const Vec3 dir = (b - a) / len;
        auto line_dist = [&](const Point3& p) {
            return norm(cross(p - a, dir));
        };
        if (line_dist(c) >= cfg.eps_duplicate || line_dist(d) >= cfg.eps_duplicate) return false;
        const double t0 = 0.0, t1 = len;
        double s0 = dot(c - a, dir), s1 = dot(d - a, dir);
        if (s0 > s1) std::swap(s0, s1);
        return std::min(t1, s1) - std::max(t0, s0) > cfg.eps_duplicate;
    };
    for (EdgeId e = 0; e < ne; ++e) {
        const auto& rec = mesh.edge(e);
        if (rec.mark == OverlapClass::Degenerate) continue;
        BBox3 box;
        box.expand(mesh.point(rec.a));
        box.expand(mesh.point(rec.b));
        box.pad(cfg.eps_duplicate);
        for (int fi : grid.query(box)) {
            const EdgeId f = static_cast<EdgeId>(fi);
            if (f <= e) continue;
            const auto& rf = mesh.edge(f);
            if (rf.mark == OverlapClass::Degenerate) continue;
            VertexId ga = mesh.duplicate_group(rec.a), gb = mesh.duplicate_group(rec.b);
            VertexId gc = mesh.duplicate_group(rf.a), gd = mesh.duplicate_group(rf.b);
            if (ga > gb) std::swap(ga, gb);
            if (gc > gd) std::swap(gc, gd);
            if (ga == gc && gb == gd) continue;  // same-endpoints handles these
            if (!collinear_overlapping(e, f) || !collinear_overlapping(f, e)) continue;
            for (EdgeId x : {e, f}) {
                if (mesh.edge(x).mark == OverlapClass::None) {
                    mesh.edge(x).mark = OverlapClass::CollinearDistinct;
                    ++out.collinear_distinct;
                }
            }
            mesh.edge(e).overlap_partners.push_back(f);
            mesh.edge(f).overlap_partners.push_back(e);
        }
    }
    return out;
}

/*
 * Merge pairs of border half-edges whose endpoints coincide across a
 * duplicate group (source of one matches target of the other and vice
 * versa): the matched vertices are welded to the group representative, which
 * turns the two half-edges into twins on the next rebuild. Repeated
 * until no matching pair is left.
 *
 * Returns the number of stitched pairs. Face count never changes;
 * vertices are only re-referenced, never moved or erased.
 */
inline int stitch_pseudo_holes(SurfaceMesh& mesh, const RepairConfig& cfg,
                               PreprocessReport* report = nullptr) {
    mark_duplicates(mesh, cfg);
    int total = 0;
    for (int pass = 0; pass < 1024; ++pass) {
        if (mesh.needs_rebuild()) mesh.rebuild_connectivity();

        std::map<std::pair<VertexId, VertexId>, std::vector<HalfedgeId>> buckets;
        for (HalfedgeId h : mesh.border_halfedges()) {
            const VertexId go = mesh.duplicate_group(mesh.halfedge(h).origin);
            const VertexId gt = mesh.duplicate_group(mesh.target(h));
            if (go == gt) continue;  // degenerate
            buckets[{go, gt}].push_back(h);
        }

        std::vector<std::pair<HalfedgeId, HalfedgeId>> stitches;
        for (const auto& [key, fwd] : buckets) {
            if (key.first > key.second) continue;  // visit each unordered pair once
            const auto it = buckets.find({key.second, key.first});
            if (it == buckets.end()) continue;
            const auto& bwd = it->second;
            if (fwd.size() + bwd.size() >= 3 && report) {
                // ambiguous fan: only the lexicographically smallest pair is
                // stitched this pass, the rest wait for the next one
                ++report->stitch_ambiguities;
            }
            stitches.emplace_back(fwd.front(), bwd.front());
        }
        if (stitches.empty()) break;

        // weld only the participating vertex ids to their group reps
        std::map<VertexId, VertexId> remap;
        for (const auto& [h1, h2] : stitches) {
            for (VertexId v : {mesh.halfedge(h1).origin, mesh.target(h1),
                               mesh.halfedge(h2).origin, mesh.target(h2)}) {
                remap[v] = mesh.duplicate_group(v);
            }
        }
        for (FaceId f = 0; f < static_cast<FaceId>(mesh.face_count()); ++f) {
            auto fc = mesh.face(f);
            bool changed = false;
            for (int k = 0; k < 3; ++k) {
                auto it = remap.find(fc[k]);
                if (it != remap.end() && it->second != fc[k]) {
                    fc[k] = it->second;
                    changed = true;
                }
            }
            if (changed) mesh.set_face(f, fc[0], fc[1], fc[2]);
        }
        total += static_cast<int>(stitches.size());
    }
    if (mesh.needs_rebuild()) mesh.rebuild_connectivity();
    if (report) report->stitched_pairs += total;
    return total;
}

namespace detail {

struct FaceRemesh {
    std::vector<std::array<VertexId, 3>> new_faces;
    std::vector<Point3> new_points;  // appended vertices, on the face plane
    int discarded = 0;
};

// Retriangulate one face in its own supporting plane with the given cut
// segments as constraints. Segment endpoints become new vertices unless
// they coincide with a corner.
inline FaceRemesh remesh_face_in_plane(const SurfaceMesh& mesh, FaceId f,
                                       const std::vector<Segment3>& cuts,
                                       VertexId next_vertex_id) {
    constexpr double kSnap = 1e-9;
    const Triangle3 tri = mesh.face_triangle(f);
    const Plane pl = Plane::from_point_normal(tri.a, cross(tri.b - tri.a, tri.c - tri.a));

    std::vector<Point2> pts2{project_to_plane(tri.a, pl), project_to_plane(tri.b, pl),
                             project_to_plane(tri.c, pl)};
    std::vector<Point3> pts3{tri.a, tri.b, tri.c};

    auto add_point = [&](const Point3& p) {
        const Point2 q = project_to_plane(p, pl);
        for (size_t i = 0; i < pts2.size(); ++i) {
            if (distance2(pts2[i], q) < kSnap) return static_cast<int>(i);
        }
        pts2.push_back(q);
        pts3.push_back(p);
        return static_cast<int>(pts2.size()) - 1;
    };
    std::vector<std::pair<int, int>> raw_constraints;
    for (const auto& seg : cuts) {
        const int i = add_point(seg.a);
        const int j = add_point(seg.b);
        if (i != j) raw_constraints.emplace_back(i, j);
    }
    for (int k = 0; k < 3; ++k) raw_constraints.emplace_back(k, (k + 1) % 3);

    // split each constraint at any point lying on it
    auto on_segment = [&](const Point2& a, const Point2& b, const Point2& p) {
        const Point2 ab = b - a;
        const double len2 = ab.x * ab.x + ab.y * ab.y;
        if (len2 < kSnap * kSnap) return -1.0;
        const double t = dot2(p - a, ab) / len2;
        if (t <= 1e-9 || t >= 1.0 - 1e-9) return -1.0;
        const Point2 foot = a + ab * t;
        return distance2(foot, p) < kSnap ? t : -1.0;
    };
    std::vector<std::pair<int, int>> constraints;
    for (const auto& [i, j] : raw_constraints) {
        std::vector<std::pair<double, int>> on;
        for (int k = 0; k < static_cast<int>(pts2.size()); ++k) {
            if (k == i || k == j) continue;
            const double t = on_segment(pts2[i], pts2[j], pts2[k]);
            if (t > 0.0) on.emplace_back(t, k);
        }
        std::sort(on.begin(), on.end());
        int prev = i;
        for (const auto& [t, k] : on) {
            constraints.emplace_back(prev, k);
            prev = k;
        }
        constraints.emplace_back(prev, j);
    }

    FaceRemesh out;
    const ConstrainedTriangulation2 tess = cdt(pts2, constraints);

    // local index -> mesh vertex id; corners keep their ids, cut points
    // get fresh ones
    const auto& fc = mesh.face(f);
    std::vector<VertexId> vid(pts2.size(), kInvalidId);
    for (int k = 0; k < 3; ++k) vid[k] = fc[k];
    for (size_t k = 3; k < pts2.size(); ++k) {
        vid[k] = next_vertex_id++;
        out.new_points.push_back(pts3[k]);
    }

    for (const auto& t : tess.interior_triangles()) {
        const Triangle3 world{pts3[t[0]], pts3[t[1]], pts3[t[2]]};
        if (area(world) <= 1e-12) {
            ++out.discarded;
            continue;
        }
        out.new_faces.push_back({vid[t[0]], vid[t[1]], vid[t[2]]});
    }
    return out;
}

}  // namespace detail

/*
 * Find pairs of genuinely crossing faces (non-adjacent, intersection
 * segment longer than eps_duplicate, segment interior clear of both
 * boundaries) and retriangulate each affected face in its own plane
 * with the cut segments as constraints. New vertices land exactly on
 * the recorded intersection segments, hence on both original planes.
 */
inline void resolve_self_intersections(SurfaceMesh& mesh, const RepairConfig& cfg,
                                       PreprocessReport& report) {
    if (mesh.needs_rebuild()) mesh.rebuild_connectivity();
    const FaceId nf = static_cast<FaceId>(mesh.face_count());
    if (nf == 0) return;

    double mean_extent = 0.0;
    std::vector<BBox3> boxes(nf);
    for (FaceId f = 0; f < nf; ++f) {
        boxes[f] = bbox_of(mesh.face_triangle(f));
        mean_extent += std::max({boxes[f].hi.x - boxes[f].lo.x, boxes[f].hi.y - boxes[f].lo.y,
                                 boxes[f].hi.z - boxes[f].lo.z});
    }
    mean_extent /= nf;
    SpatialGrid grid(std::max(mean_extent, 1e-6));
    for (FaceId f = 0; f < nf; ++f) grid.insert(f, boxes[f]);

    std::map<FaceId, std::vector<Segment3>> cuts;
    for (FaceId f = 0; f < nf; ++f) {
        const auto& fa = mesh.face(f);
        for (int gi : grid.query(boxes[f])) {
            const FaceId g = static_cast<FaceId>(gi);
            if (g <= f) continue;
            const auto& fb = mesh.face(g);
            bool adjacent = false;
            for (int i = 0; i < 3 && !adjacent; ++i) {
                for (int j = 0; j < 3; ++j) {
                    if (fa[i] == fb[j]) { adjacent = true; break; }
                }
            }
            if (adjacent) continue;
            const Triangle3 ta = mesh.face_triangle(f);
            const Triangle3 tb = mesh.face_triangle(g);
            const auto seg = triangle_intersection_segment(ta, tb);
            if (!seg || seg->length() <= cfg.eps_duplicate) continue;
            const Point3 m = seg->midpoint();
            if (point_triangle_boundary_distance(m, ta) <= 1e-9 ||
                point_triangle_boundary_distance(m, tb) <= 1e-9) {
                continue;  // touching along an edge, not crossing
            }
            ++report.self_intersection_pairs;
            cuts[f].push_back(*seg);
            cuts[g].push_back(*seg);
        }
    }
    if (cuts.empty()) return;

    for (const auto& [f, segs] : cuts) {
        const auto res = detail::remesh_face_in_plane(mesh, f, segs,
                                                      static_cast<VertexId>(mesh.vertex_count()));
        for (const auto& p : res.new_points) mesh.add_vertex(p);
        for (const auto& nf2 : res.new_faces) mesh.add_face(nf2[0], nf2[1], nf2[2]);
        mesh.remove_face(f);
        ++report.faces_remeshed;
        report.remesh_faces_added += static_cast<int>(res.new_faces.size());
        report.degenerate_subtriangles_discarded += res.discarded;
    }
    mesh.compact();
}

/// Phase 1 of the pipeline: self-intersection remeshing, duplicate
/// marking, pseudo-hole stitching, overlap marking.
inline PreprocessReport preprocess(SurfaceMesh& mesh, const RepairConfig& cfg) {
    cfg.validate();
    if (mesh.needs_rebuild()) mesh.rebuild_connectivity();
    PreprocessReport report;
    resolve_self_intersections(mesh, cfg, report);
    report.duplicates = mark_duplicates(mesh, cfg);
    stitch_pseudo_holes(mesh, cfg, &report);
    report.duplicates = mark_duplicates(mesh, cfg);
    report.overlaps = mark_overlapping_edges(mesh, cfg);
    return report;
}

}  // namespace lodfill
