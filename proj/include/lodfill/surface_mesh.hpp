#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lodfill/geometry.hpp"

namespace lodfill {

using VertexId = std::int32_t;
using HalfedgeId = std::int32_t;
using FaceId = std::int32_t;
using EdgeId = std::int32_t;

inline constexpr std::int32_t kInvalidId = -1;
/// face value of a half-edge that lies on a boundary
inline constexpr std::int32_t kBorderFace = -2;
/// twin value of an unpaired extra half-edge on an over-populated edge
inline constexpr std::int32_t kNonManifoldTwin = -3;

struct Halfedge {
    VertexId origin = kInvalidId;
    HalfedgeId twin = kInvalidId;
    HalfedgeId next = kInvalidId;
    HalfedgeId prev = kInvalidId;
    FaceId face = kInvalidId;
};

enum class OverlapClass : std::uint8_t { None = 0, Degenerate, SameEndpoints, CollinearDistinct };

struct EdgeRecord {
    VertexId a = kInvalidId, b = kInvalidId;  // a <= b
    std::vector<HalfedgeId> halfedges;        // interior half-edges on this edge, ascending
    OverlapClass mark = OverlapClass::None;
    std::vector<EdgeId> overlap_partners;     // other edges this one overlaps (same-endpoint or collinear)
};

/*
 * Indexed triangle mesh with derived half-edge connectivity, tolerant of
 * non-manifold input.
 *
 * The face list (vertex-id triples) is the source of truth; half-edge
 * records are rebuilt from it after every structural change.  Interior
 * half-edges are laid out as 3*f+k for face f, corner k, so ids are
 * stable and deterministic; border half-edges are appended after them
 * in edge order.
 *
 * Twin pairing on each undirected edge is greedy by opposite
 * orientation, ascending half-edge id.  A half-edge left unpaired on an
 * edge that carries others gets twin = kNonManifoldTwin; a half-edge
 * alone on its edge gets a materialized border twin with
 * face = kBorderFace.  Border next/prev links follow the boundary loop
 * where the fan around the vertex is intact and fall back to ascending
 * id otherwise.
 *
 * Vertices are never erased: welding rewrites face corners and leaves
 * the old vertex unreferenced, which keeps ids and coordinates stable
 * for callers that captured them.
 */
class SurfaceMesh {
public:
    // --- construction -------------------------------------------------

    VertexId add_vertex(const Point3& p) {
        points_.push_back(p);
        duplicate_group_.push_back(static_cast<VertexId>(points_.size()) - 1);
        return static_cast<VertexId>(points_.size()) - 1;
    }

    FaceId add_face(VertexId a, VertexId b, VertexId c) {
        faces_.push_back({a, b, c});
        dirty_ = true;
        return static_cast<FaceId>(faces_.size()) - 1;
    }

    void remove_face(FaceId f) {
        dead_faces_.push_back(f);
        dirty_ = true;
    }

    void set_face(FaceId f, VertexId a, VertexId b, VertexId c) {
        faces_[f] = {a, b, c};
        dirty_ = true;
    }

    /// Drop faces marked dead, preserving the relative order of the rest,
    /// then rebuild connectivity.
    void compact() {
        if (!dead_faces_.empty()) {
            std::vector<char> dead(faces_.size(), 0);
            for (FaceId f : dead_faces_) dead[f] = 1;
            std::vector<std::array<VertexId, 3>> kept;
            kept.reserve(faces_.size());
            for (size_t f = 0; f < faces_.size(); ++f) {
                if (!dead[f]) kept.push_back(faces_[f]);
            }
            faces_ = std::move(kept);
            dead_faces_.clear();
        }
        rebuild_connectivity();
    }

    // --- accessors -----------------------------------------------------

    size_t vertex_count() const { return points_.size(); }
    size_t face_count() const { return faces_.size(); }
    size_t halfedge_count() const { return halfedges_.size(); }
    size_t edge_count() const { return edges_.size(); }

    const Point3& point(VertexId v) const { return points_[v]; }
    Point3& point(VertexId v) { return points_[v]; }
    const std::vector<Point3>& points() const { return points_; }
    const std::array<VertexId, 3>& face(FaceId f) const { return faces_[f]; }
    const std::vector<std::array<VertexId, 3>>& faces() const { return faces_; }

    const Halfedge& halfedge(HalfedgeId h) const { return halfedges_[h]; }
    const std::vector<Halfedge>& halfedges() const { return halfedges_; }

    VertexId target(HalfedgeId h) const {
        const Halfedge& he = halfedges_[h];
        if (he.face != kBorderFace) return halfedges_[he.next].origin;
        // border half-edge: target is the origin of its interior twin
        return halfedges_[he.twin].origin;
    }

    bool is_border(HalfedgeId h) const { return halfedges_[h].face == kBorderFace; }

    const EdgeRecord& edge(EdgeId e) const { return edges_[e]; }
    EdgeRecord& edge(EdgeId e) { return edges_[e]; }
    EdgeId edge_of_halfedge(HalfedgeId h) const { return halfedge_edge_[h]; }

    EdgeId find_edge(VertexId a, VertexId b) const {
        if (a > b) std::swap(a, b);
        auto it = edge_lookup_.find({a, b});
        return it == edge_lookup_.end() ? kInvalidId : it->second;
    }

    bool is_nonmanifold_edge(EdgeId e) const {
        for (HalfedgeId h : edges_[e].halfedges) {
            if (halfedges_[h].twin == kNonManifoldTwin) return true;
        }
        return false;
    }

    /// Faces incident to vertex v (by corner reference), ascending.
    const std::vector<FaceId>& vertex_faces(VertexId v) const { return vertex_faces_[v]; }
    /// Edges incident to vertex v, ascending.
    const std::vector<EdgeId>& vertex_edges(VertexId v) const { return vertex_edges_[v]; }

    Triangle3 face_triangle(FaceId f) const {
        const auto& fc = faces_[f];
        return {points_[fc[0]], points_[fc[1]], points_[fc[2]]};
    }

    double face_area(FaceId f) const { return area(face_triangle(f)); }

    std::vector<HalfedgeId> border_halfedges() const {
        std::vector<HalfedgeId> out;
        for (HalfedgeId h = 0; h < static_cast<HalfedgeId>(halfedges_.size()); ++h) {
            if (halfedges_[h].face == kBorderFace) out.push_back(h);
        }
        return out;
    }

    size_t border_halfedge_count() const { return border_count_; }

    // --- duplicate-vertex marks -----------------------------------------

    VertexId duplicate_group(VertexId v) const { return duplicate_group_[v]; }
    void set_duplicate_group(VertexId v, VertexId rep) { duplicate_group_[v] = rep; }
    /// Members of v's duplicate group (ascending), computed from marks.
    const std::vector<VertexId>& group_members(VertexId v) const {
        return group_members_[duplicate_group_[v]];
    }
    void refresh_group_members() {
        group_members_.assign(points_.size(), {});
        for (VertexId v = 0; v < static_cast<VertexId>(points_.size()); ++v) {
            group_members_[duplicate_group_[v]].push_back(v);
        }
        for (VertexId v = 0; v < static_cast<VertexId>(points_.size()); ++v) {
            if (group_members_[v].empty()) group_members_[v].push_back(v);  // self fallback
        }
    }

    // --- connectivity ----------------------------------------------------

    void rebuild_connectivity() {
        halfedges_.clear();
        halfedge_edge_.clear();
        edges_.clear();
        edge_lookup_.clear();
        border_count_ = 0;

        const size_t nf = faces_.size();
        halfedges_.resize(3 * nf);
        for (size_t f = 0; f < nf; ++f) {
            for (int k = 0; k < 3; ++k) {
                Halfedge& he = halfedges_[3 * f + k];
                he.origin = faces_[f][k];
                he.next = static_cast<HalfedgeId>(3 * f + (k + 1) % 3);
                he.prev = static_cast<HalfedgeId>(3 * f + (k + 2) % 3);
                he.face = static_cast<FaceId>(f);
                he.twin = kInvalidId;
            }
        }

        // undirected edge records, deterministically ordered by (a, b)
        std::map<std::pair<VertexId, VertexId>, std::vector<HalfedgeId>> buckets;
        for (HalfedgeId h = 0; h < static_cast<HalfedgeId>(3 * nf); ++h) {
            VertexId a = halfedges_[h].origin;
            VertexId b = halfedges_[halfedges_[h].next].origin;
            if (a > b) std::swap(a, b);
            buckets[{a, b}].push_back(h);
        }
        halfedge_edge_.assign(3 * nf, kInvalidId);
        for (auto& [key, hs] : buckets) {
            EdgeRecord rec;
            rec.a = key.first;
            rec.b = key.second;
            rec.halfedges = hs;
            const EdgeId eid = static_cast<EdgeId>(edges_.size());
            edges_.push_back(std::move(rec));
            edge_lookup_[key] = eid;
            for (HalfedgeId h : hs) halfedge_edge_[h] = eid;
        }

        pair_twins();
        link_borders();
        build_incidence();
        dirty_ = false;
    }

    bool needs_rebuild() const { return dirty_ || !dead_faces_.empty(); }

    /// Structural invariant check; returns a description of the first
    /// violation, or empty when the mesh is consistent.
    std::string check_valid() const {
        for (HalfedgeId h = 0; h < static_cast<HalfedgeId>(halfedges_.size()); ++h) {
            const Halfedge& he = halfedges_[h];
            if (he.origin < 0 || he.origin >= static_cast<VertexId>(points_.size()))
                return "halfedge origin out of range";
            if (he.twin >= 0 && halfedges_[he.twin].twin != h)
                return "twin(twin(h)) != h";
            if (he.face != kBorderFace) {
                if (he.next < 0 || halfedges_[he.next].prev != h) return "next/prev not inverse";
                HalfedgeId cur = h;
                for (int i = 0; i < 3; ++i) cur = halfedges_[cur].next;
                if (cur != h) return "face cycle not length 3";
            }
        }
        return {};
    }

private:
    void pair_twins() {
        for (auto& rec : edges_) {
            std::vector<HalfedgeId> forward, backward;  // forward: origin == rec.a
            for (HalfedgeId h : rec.halfedges) {
                (halfedges_[h].origin == rec.a ? forward : backward).push_back(h);
            }
            const size_t npairs = std::min(forward.size(), backward.size());
            for (size_t i = 0; i < npairs; ++i) {
                halfedges_[forward[i]].twin = backward[i];
                halfedges_[backward[i]].twin = forward[i];
            }
            const bool lone = rec.halfedges.size() == 1;
            for (size_t i = npairs; i < forward.size(); ++i) {
                halfedges_[forward[i]].twin = lone ? kInvalidId : kNonManifoldTwin;
            }
            for (size_t i = npairs; i < backward.size(); ++i) {
                halfedges_[backward[i]].twin = lone ? kInvalidId : kNonManifoldTwin;
            }
        }
        // materialize border twins for lone unpaired half-edges
        for (EdgeId e = 0; e < static_cast<EdgeId>(edges_.size()); ++e) {
            if (edges_[e].halfedges.size() != 1) continue;
            const HalfedgeId inner = edges_[e].halfedges[0];
            if (halfedges_[inner].twin != kInvalidId) continue;
            Halfedge bh;
            bh.origin = halfedges_[halfedges_[inner].next].origin;
            bh.face = kBorderFace;
            bh.twin = inner;
            const HalfedgeId bid = static_cast<HalfedgeId>(halfedges_.size());
            halfedges_.push_back(bh);
            halfedge_edge_.push_back(e);
            halfedges_[inner].twin = bid;
            ++border_count_;
        }
    }

    void link_borders() {
        // walk the fan around the border target vertex to find the
        // outgoing border continuation
        std::vector<HalfedgeId> unlinked;
        for (HalfedgeId h = static_cast<HalfedgeId>(3 * faces_.size());
             h < static_cast<HalfedgeId>(halfedges_.size()); ++h) {
            if (halfedges_[h].face != kBorderFace) continue;
            HalfedgeId g = halfedges_[h].twin;  // interior, origin == target(h)
            HalfedgeId found = kInvalidId;
            for (size_t guard = 0; guard <= halfedges_.size(); ++guard) {
                const HalfedgeId p = halfedges_[g].prev;  // ends at target(h)
                const HalfedgeId t = halfedges_[p].twin;
                if (t == kNonManifoldTwin || t == kInvalidId) break;
                if (halfedges_[t].face == kBorderFace) { found = t; break; }
                g = t;
            }
            if (found != kInvalidId && halfedges_[found].prev == kInvalidId) {
                halfedges_[h].next = found;
                halfedges_[found].prev = h;
            } else {
                unlinked.push_back(h);
            }
        }
        // fallback: pair leftover borders at the same vertex by ascending id
        std::map<VertexId, std::vector<HalfedgeId>> outgoing;
        for (HalfedgeId h = static_cast<HalfedgeId>(3 * faces_.size());
             h < static_cast<HalfedgeId>(halfedges_.size()); ++h) {
            if (halfedges_[h].face == kBorderFace && halfedges_[h].prev == kInvalidId) {
                outgoing[halfedges_[h].origin].push_back(h);
            }
        }
        for (HalfedgeId h : unlinked) {
            if (halfedges_[h].next != kInvalidId) continue;
            const VertexId tv = target(h);
            auto it = outgoing.find(tv);
            if (it == outgoing.end()) continue;
            for (HalfedgeId cand : it->second) {
                if (halfedges_[cand].prev == kInvalidId && cand != h) {
                    halfedges_[h].next = cand;
                    halfedges_[cand].prev = h;
                    break;
                }
            }
        }
    }

    void build_incidence() {
        vertex_faces_.assign(points_.size(), {});
        vertex_edges_.assign(points_.size(), {});
        for (size_t f = 0; f < faces_.size(); ++f) {
            for (int k = 0; k < 3; ++k) {
                auto& vf = vertex_faces_[faces_[f][k]];
                if (vf.empty() || vf.back() != static_cast<FaceId>(f)) {
                    vf.push_back(static_cast<FaceId>(f));
                }
            }
        }
        for (EdgeId e = 0; e < static_cast<EdgeId>(edges_.size()); ++e) {
            vertex_edges_[edges_[e].a].push_back(e);
            if (edges_[e].b != edges_[e].a) vertex_edges_[edges_[e].b].push_back(e);
        }
        if (group_members_.size() != points_.size()) refresh_group_members();
    }

    std::vector<Point3> points_;
    std::vector<std::array<VertexId, 3>> faces_;
    std::vector<FaceId> dead_faces_;
    std::vector<Halfedge> halfedges_;
    std::vector<EdgeId> halfedge_edge_;
    std::vector<EdgeRecord> edges_;
    std::map<std::pair<VertexId, VertexId>, EdgeId> edge_lookup_;
    std::vector<VertexId> duplicate_group_;
    std::vector<std::vector<VertexId>> group_members_;
    std::vector<std::vector<FaceId>> vertex_faces_;
    std::vector<std::vector<EdgeId>> vertex_edges_;
    size_t border_count_ = 0;
    bool dirty_ = false;
};

struct TopologySummary {
    int euler = 0;              // V - E + F over face-referenced vertices
    int border_halfedges = 0;
    int components = 0;         // vertex-adjacency components (referenced vertices)
};

/// Euler characteristic, border count and component count. Vertices not
/// referenced by any face do not contribute (welding leaves orphans
/// behind on purpose).
inline TopologySummary euler_and_borders(const SurfaceMesh& mesh) {
    TopologySummary out;
    out.border_halfedges = static_cast<int>(mesh.border_halfedge_count());

    std::vector<char> referenced(mesh.vertex_count(), 0);
    for (const auto& f : mesh.faces()) {
        referenced[f[0]] = referenced[f[1]] = referenced[f[2]] = 1;
    }
    int nv = 0;
    for (char r : referenced) nv += r;
    out.euler = nv - static_cast<int>(mesh.edge_count()) + static_cast<int>(mesh.face_count());

    std::vector<int> comp(mesh.vertex_count(), -1);
    int ncomp = 0;
    for (VertexId seed = 0; seed < static_cast<VertexId>(mesh.vertex_count()); ++seed) {
        if (!referenced[seed] || comp[seed] >= 0) continue;
        std::vector<VertexId> stack{seed};
        comp[seed] = ncomp;
        while (!stack.empty()) {
            const VertexId v = stack.back();
            stack.pop_back();
            for (EdgeId e : mesh.vertex_edges(v)) {
                const auto& rec = mesh.edge(e);
                for (VertexId w : {rec.a, rec.b}) {
                    if (comp[w] < 0) {
                        comp[w] = ncomp;
                        stack.push_back(w);
                    }
                }
            }
        }
        ++ncomp;
    }
    out.components = ncomp;
    return out;
}

/// Per-component V - E + F, ordered by component discovery (lowest seed
/// vertex first).
inline std::vector<int> per_component_euler(const SurfaceMesh& mesh) {
    std::vector<char> referenced(mesh.vertex_count(), 0);
    for (const auto& f : mesh.faces()) {
        referenced[f[0]] = referenced[f[1]] = referenced[f[2]] = 1;
    }
    std::vector<int> comp(mesh.vertex_count(), -1);
    int ncomp = 0;
    for (VertexId seed = 0; seed < static_cast<VertexId>(mesh.vertex_count()); ++seed) {
        if (!referenced[seed] || comp[seed] >= 0) continue;
        std::vector<VertexId> stack{seed};
        comp[seed] = ncomp;
        while (!stack.empty()) {
            const VertexId v = stack.back();
            stack.pop_back();
            for (EdgeId e : mesh.vertex_edges(v)) {
                const auto& rec = mesh.edge(e);
                for (VertexId w : {rec.a, rec.b}) {
                    if (comp[w] < 0) {
                        comp[w] = ncomp;
                        stack.push_back(w);
                    }
                }
            }
        }
        ++ncomp;
    }
    std::vector<int> v_of(ncomp, 0), e_of(ncomp, 0), f_of(ncomp, 0);
    for (VertexId v = 0; v < static_cast<VertexId>(mesh.vertex_count()); ++v) {
        if (comp[v] >= 0) ++v_of[comp[v]];
    }
    for (EdgeId e = 0; e < static_cast<EdgeId>(mesh.edge_count()); ++e) {
        ++e_of[comp[mesh.edge(e).a]];
    }
    for (const auto& f : mesh.faces()) ++f_of[comp[f[0]]];
    std::vector<int> out(ncomp);
    for (int c = 0; c < ncomp; ++c) out[c] = v_of[c] - e_of[c] + f_of[c];
    return out;
}

}  // namespace lodfill
