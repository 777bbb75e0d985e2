#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lodfill/config.hpp"
#include "lodfill/geometry.hpp"
#include "lodfill/surface_mesh.hpp"

namespace lodfill {

/*
 * The triangle spanned by a border half-edge and its preceding one:
 * v0v1 is the preceding half-edge, v1v2 the current. If this triangle
 * is covered by an existing incident face, the apparent gap is a
 * pseudo-hole at that spot.
 */
struct VirtualTriangle {
    Point3 v0, v1, v2;
    HalfedgeId prev_halfedge = kInvalidId;
    HalfedgeId halfedge = kInvalidId;

    Triangle3 triangle() const { return {v0, v1, v2}; }
};

struct IntersectionMetrics {
    double max_distance = 0.0;  // largest vertex-to-plane distance, meters
    double area_ratio = 0.0;    // projected overlap area / candidate face area
};

/// Threshold-free part of the covering test: distance of the virtual
/// triangle to the face's supporting plane, and their projected overlap
/// ratio.
inline IntersectionMetrics intersection_metrics(const Triangle3& alpha, const Triangle3& beta) {
    IntersectionMetrics m;
    const Vec3 n = cross(beta.b - beta.a, beta.c - beta.a);
    const Plane pl = Plane::from_point_normal(beta.a, n);
    m.max_distance = std::max({point_plane_distance(alpha.a, pl),
                               point_plane_distance(alpha.b, pl),
                               point_plane_distance(alpha.c, pl)});
    const Triangle2 a2{project_to_plane(alpha.a, pl), project_to_plane(alpha.b, pl),
                       project_to_plane(alpha.c, pl)};
    const Triangle2 b2{project_to_plane(beta.a, pl), project_to_plane(beta.b, pl),
                       project_to_plane(beta.c, pl)};
    m.area_ratio = triangle_overlap_area(a2, b2) / area(b2);
    return m;
}

/// True when the face covers the virtual triangle: close in distance
/// AND with enough projected overlap. Degenerate faces cover nothing.
inline bool intersection_test(const Triangle3& alpha, const Triangle3& beta,
                              const RepairConfig& cfg) {
    if (area(beta) <= 1e-12) return false;
    const IntersectionMetrics m = intersection_metrics(alpha, beta);
    return m.max_distance < cfg.eps_distance && m.area_ratio > cfg.eps_area_ratio;
}

enum class RingEdgeOrigin : std::uint8_t { Traversed, OverlapCompleted, NonmanifoldCompleted };

struct RingEdge {
    VertexId from = kInvalidId;
    VertexId to = kInvalidId;
    RingEdgeOrigin origin = RingEdgeOrigin::Traversed;
};

struct BorderRing {
    std::vector<RingEdge> edges;
    bool closed = false;
    std::string open_reason;

    std::pair<VertexId, VertexId> edge_key(size_t i) const {
        VertexId a = edges[i].from, b = edges[i].to;
        if (a > b) std::swap(a, b);
        return {a, b};
    }
    bool contains_edge(VertexId a, VertexId b) const {
        if (a > b) std::swap(a, b);
        for (size_t i = 0; i < edges.size(); ++i) {
            if (edge_key(i) == std::make_pair(a, b)) return true;
        }
        return false;
    }
    std::vector<VertexId> vertex_ids() const {
        std::set<VertexId> s;
        for (const auto& e : edges) {
            s.insert(e.from);
            s.insert(e.to);
        }
        return {s.begin(), s.end()};
    }
    int count_origin(RingEdgeOrigin o) const {
        int n = 0;
        for (const auto& e : edges) n += e.origin == o ? 1 : 0;
        return n;
    }
};

enum class RejectReason : std::uint8_t { PseudoHole, Unclosable };

struct RejectedCandidate {
    BorderRing ring;  // whatever was collected (possibly empty)
    RejectReason reason = RejectReason::Unclosable;
    std::string detail;
    int rejected_pairs = 0;
};

struct HoleSet {
    std::vector<BorderRing> true_holes;
    std::vector<RejectedCandidate> rejected;
};

namespace detail {

struct ClosureState {
    bool closed = false;
    std::vector<VertexId> endpoint_groups;  // odd-degree groups, ascending
};

inline ClosureState ring_closure(const BorderRing& ring, const SurfaceMesh& mesh) {
    ClosureState out;
    if (ring.edges.empty()) return out;
    std::map<VertexId, int> degree;
    std::map<VertexId, std::vector<VertexId>> adj;
    for (const auto& e : ring.edges) {
        const VertexId ga = mesh.duplicate_group(e.from);
        const VertexId gb = mesh.duplicate_group(e.to);
        ++degree[ga];
        ++degree[gb];
        adj[ga].push_back(gb);
        adj[gb].push_back(ga);
    }
    for (const auto& [g, d] : degree) {
        if (d % 2 != 0) out.endpoint_groups.push_back(g);
    }
    if (!out.endpoint_groups.empty() || ring.edges.size() < 3) return out;
    // connectivity over groups
    std::set<VertexId> seen{degree.begin()->first};
    std::vector<VertexId> stack{degree.begin()->first};
    while (!stack.empty()) {
        const VertexId g = stack.back();
        stack.pop_back();
        for (VertexId h : adj[g]) {
            if (seen.insert(h).second) stack.push_back(h);
        }
    }
    out.closed = seen.size() == degree.size();
    return out;
}

}  // namespace detail

/// All faces incident to the duplicate groups of the three given
/// vertices, ascending and unique.
inline std::vector<FaceId> incident_faces_of_groups(const SurfaceMesh& mesh, VertexId a,
                                                    VertexId b, VertexId c) {
    std::set<FaceId> faces;
    for (VertexId v : {a, b, c}) {
        for (VertexId member : mesh.group_members(v)) {
            for (FaceId f : mesh.vertex_faces(member)) faces.insert(f);
        }
    }
    return {faces.begin(), faces.end()};
}

/// True when the virtual triangle over (v0,v1,v2) is covered by any
/// face incident to those vertices' duplicate groups.
inline bool alpha_covered_by_incident_face(const SurfaceMesh& mesh, const RepairConfig& cfg,
                                           VertexId v0, VertexId v1, VertexId v2) {
    const Triangle3 alpha{mesh.point(v0), mesh.point(v1), mesh.point(v2)};
    if (area(alpha) <= 1e-12) return false;  // degenerate: covers nothing, collect
    for (FaceId f : incident_faces_of_groups(mesh, v0, v1, v2)) {
        if (intersection_test(alpha, mesh.face_triangle(f), cfg)) return true;
    }
    return false;
}

struct TraceResult {
    std::vector<BorderRing> rings;            // candidate rings in seed order
    std::vector<int> rejected_pairs;          // per ring
    std::vector<char> merged_away;            // ring was absorbed into an earlier one
    std::set<std::pair<VertexId, VertexId>> rejected_edges;  // failed and never collected
    std::map<std::pair<VertexId, VertexId>, int> edge_owner;
};

/*
 * Border walk (hole detection, phase 2 core): every unvisited valid
 * border half-edge seeds a walk along boundary next/prev links. Each
 * step pairs the current half-edge with its preceding border half-edge
 * into a virtual triangle and collects the pair unless some incident
 * face covers it. Walks that touch an edge already collected by an
 * earlier walk merge into that walk's ring.
 *
 * A "valid" border half-edge has face == kBorderFace and an edge not
 * marked degenerate.
 */
inline TraceResult trace_border_rings(const SurfaceMesh& mesh, const RepairConfig& cfg) {
    TraceResult out;
    const auto nh = static_cast<HalfedgeId>(mesh.halfedge_count());
    std::vector<char> visited(nh, 0);
    std::set<std::pair<VertexId, VertexId>> in_failing_pair;

    auto valid_border = [&](HalfedgeId h) {
        if (h < 0 || h >= nh || !mesh.is_border(h)) return false;
        return mesh.edge(mesh.edge_of_halfedge(h)).mark != OverlapClass::Degenerate;
    };
    auto ukey = [&](HalfedgeId h) {
        VertexId a = mesh.halfedge(h).origin, b = mesh.target(h);
        if (a > b) std::swap(a, b);
        return std::make_pair(a, b);
    };

    // merged ring bookkeeping
    std::vector<int> ring_alias;
    auto resolve = [&](int r) {
        while (ring_alias[r] != r) r = ring_alias[r];
        return r;
    };

    auto collect_edge = [&](HalfedgeId h, int ring) {
        const auto key = ukey(h);
        auto it = out.edge_owner.find(key);
        if (it != out.edge_owner.end()) {
            const int other = resolve(it->second);
            if (other != ring) {
                // merge the older arc into the current ring
                for (const auto& e : out.rings[other].edges) out.rings[ring].edges.push_back(e);
                out.rejected_pairs[ring] += out.rejected_pairs[other];
                out.rings[other].edges.clear();
                out.merged_away[other] = 1;
                ring_alias[other] = ring;
            }
            return;
        }
        out.edge_owner[key] = ring;
        out.rings[ring].edges.push_back(
            {mesh.halfedge(h).origin, mesh.target(h), RingEdgeOrigin::Traversed});
    };

    // preceding border half-edge: the prev link when it is a valid
    // border, otherwise the smallest unvisited valid border half-edge
    // arriving at the duplicate group of h's origin
    auto preceding = [&](HalfedgeId h) -> HalfedgeId {
        const HalfedgeId p = mesh.halfedge(h).prev;
        if (p != kInvalidId && valid_border(p)) return p;
        const VertexId g = mesh.duplicate_group(mesh.halfedge(h).origin);
        for (HalfedgeId t = 0; t < nh; ++t) {
            if (t == h || visited[t] || !valid_border(t)) continue;
            if (mesh.duplicate_group(mesh.target(t)) == g) return t;
        }
        return kInvalidId;
    };

    auto process = [&](HalfedgeId h, int ring) {
        visited[h] = 1;
        const HalfedgeId hp = preceding(h);
        if (hp == kInvalidId) return;
        const VertexId v0 = mesh.halfedge(hp).origin;
        const VertexId v1 = mesh.halfedge(h).origin;
        const VertexId v2 = mesh.target(h);
        if (!alpha_covered_by_incident_face(mesh, cfg, v0, v1, v2)) {
            collect_edge(hp, ring);
            collect_edge(h, ring);
        } else {
            ++out.rejected_pairs[ring];
            in_failing_pair.insert(ukey(hp));
            in_failing_pair.insert(ukey(h));
        }
    };

    for (HalfedgeId seed = 0; seed < nh; ++seed) {
        if (visited[seed] || !valid_border(seed)) continue;
        const int ring = static_cast<int>(out.rings.size());
        out.rings.emplace_back();
        out.rejected_pairs.push_back(0);
        out.merged_away.push_back(0);
        ring_alias.push_back(ring);

        bool closed_loop = false;
        HalfedgeId h = seed;
        for (size_t guard = 0; guard <= mesh.halfedge_count(); ++guard) {
            process(h, resolve(ring));
            const HalfedgeId nxt = mesh.halfedge(h).next;
            if (nxt == seed) {
                closed_loop = true;
                break;
            }
            if (!valid_border(nxt) || (nxt >= 0 && visited[nxt])) break;
            h = nxt;
        }
        if (!closed_loop) {
            h = mesh.halfedge(seed).prev;
            for (size_t guard = 0; guard <= mesh.halfedge_count(); ++guard) {
                if (!valid_border(h) || visited[h]) break;
                process(h, resolve(ring));
                h = mesh.halfedge(h).prev;
            }
        }
    }

    for (const auto& key : in_failing_pair) {
        if (!out.edge_owner.count(key)) out.rejected_edges.insert(key);
    }
    for (auto& [key, owner] : out.edge_owner) owner = resolve(owner);
    for (size_t r = 0; r < out.rings.size(); ++r) {
        if (out.merged_away[r]) continue;
        out.rings[r].closed = detail::ring_closure(out.rings[r], mesh).closed;
    }
    return out;
}

/// Shared state for ring completion when run inside detect_holes:
/// which edges already failed the covering test, and which belong to
/// other candidate arcs (those merge instead of being re-walked).
struct CompletionContext {
    const std::set<std::pair<VertexId, VertexId>>* rejected_edges = nullptr;
    std::map<std::pair<VertexId, VertexId>, int>* edge_owner = nullptr;
    std::vector<BorderRing>* rings = nullptr;
    std::vector<char>* merged_away = nullptr;
    int self = -1;
};

namespace detail {

inline bool edge_is_border(const SurfaceMesh& mesh, EdgeId e) {
    const auto& rec = mesh.edge(e);
    if (rec.halfedges.size() != 1) return false;
    const HalfedgeId twin = mesh.halfedge(rec.halfedges[0]).twin;
    return twin >= 0 && mesh.is_border(twin);
}

}  // namespace detail

/*
 * Completion strategy 1 (overlapping edges): while the ring is open,
 * look at the untraversed edges incident to each endpoint's duplicate
 * group; a border edge, or an edge overlap-marked against one of the
 * ring's edges, is appended. Returns true when the ring closed.
 */
inline bool complete_ring_overlap(BorderRing& ring, const SurfaceMesh& mesh,
                                  const RepairConfig& cfg, CompletionContext* ctx = nullptr) {
    for (int iter = 0; iter < cfg.max_completion_iterations; ++iter) {
        const auto closure = detail::ring_closure(ring, mesh);
        if (closure.closed) {
            ring.closed = true;
            return true;
        }
        if (closure.endpoint_groups.empty()) break;  // empty or degenerate, nothing to extend

        struct Candidate {
            std::pair<VertexId, VertexId> key;
            EdgeId edge;
            VertexId endpoint_member;
            int merge_ring = -1;
        };
        std::optional<Candidate> best;

        for (VertexId g : closure.endpoint_groups) {
            for (VertexId member : mesh.group_members(g)) {
                for (EdgeId e : mesh.vertex_edges(member)) {
                    const auto& rec = mesh.edge(e);
                    if (rec.mark == OverlapClass::Degenerate) continue;
                    std::pair<VertexId, VertexId> key{rec.a, rec.b};
                    if (ring.contains_edge(rec.a, rec.b)) continue;
                    if (ctx && ctx->rejected_edges && ctx->rejected_edges->count(key)) continue;

                    int merge_ring = -1;
                    bool eligible = false;
                    if (detail::edge_is_border(mesh, e)) {
                        if (ctx && ctx->edge_owner) {
                            auto& owner_map = *ctx->edge_owner;
                            auto it = owner_map.find(key);
                            if (it != owner_map.end()) {
                                const int owner = it->second;
                                if (owner == ctx->self || (*ctx->merged_away)[owner] ||
                                    (*ctx->rings)[owner].closed) {
                                    continue;  // already consumed elsewhere
                                }
                                merge_ring = owner;
                            }
                        }
                        eligible = true;
                    } else {
                        // interior edge overlapping one of the ring's edges
                        for (EdgeId partner : rec.overlap_partners) {
                            const auto& pr = mesh.edge(partner);
                            if (ring.contains_edge(pr.a, pr.b)) {
                                eligible = true;
                                break;
                            }
                        }
                    }
                    if (!eligible) continue;
                    if (!best || key < best->key) {
                        best = Candidate{key, e, member, merge_ring};
                    }
                }
            }
        }
        if (!best) {
            if (ring.open_reason.empty()) ring.open_reason = "no-progress";
            return false;
        }

        if (best->merge_ring >= 0) {
            BorderRing& other = (*ctx->rings)[best->merge_ring];
            for (auto e : other.edges) {
                e.origin = RingEdgeOrigin::OverlapCompleted;
                ring.edges.push_back(e);
                auto k = std::minmax(e.from, e.to);
                (*ctx->edge_owner)[{k.first, k.second}] = ctx->self;
            }
            other.edges.clear();
            (*ctx->merged_away)[best->merge_ring] = 1;
        } else {
            const auto& rec = mesh.edge(best->edge);
            const VertexId from = best->endpoint_member;
            const VertexId to = rec.a == from ? rec.b : rec.a;
            ring.edges.push_back({from, to, RingEdgeOrigin::OverlapCompleted});
            if (ctx && ctx->edge_owner) (*ctx->edge_owner)[best->key] = ctx->self;
        }
    }
    const auto closure = detail::ring_closure(ring, mesh);
    ring.closed = closure.closed;
    if (!ring.closed && ring.open_reason.empty()) ring.open_reason = "iteration-limit";
    return ring.closed;
}

/*
 * Completion strategy 2 (non-manifold edges): candidates are vertices
 * joined to an endpoint group by a non-manifold edge. All candidates
 * must lie on the ring's fitted plane within tolerance; then the
 * nearest candidate whose connecting virtual triangle is not covered by
 * an incident face is appended, repeatedly, until the ring closes.
 */
inline bool complete_ring_nonmanifold(BorderRing& ring, const SurfaceMesh& mesh,
                                      const RepairConfig& cfg, CompletionContext* ctx = nullptr) {
    for (int iter = 0; iter < cfg.max_completion_iterations; ++iter) {
        const auto closure = detail::ring_closure(ring, mesh);
        if (closure.closed) {
            ring.closed = true;
            ring.open_reason.clear();
            return true;
        }
        if (closure.endpoint_groups.empty()) break;

        std::optional<Plane> plane;
        {
            std::vector<Point3> pts;
            for (VertexId v : ring.vertex_ids()) pts.push_back(mesh.point(v));
            try {
                plane = fit_plane(pts);
            } catch (const GeometryError&) {
                plane.reset();  // tiny or collinear ring: skip the coplanarity gate
            }
        }

        bool progress = false;
        for (VertexId g : closure.endpoint_groups) {
            struct Candidate {
                double dist;
                VertexId vertex;
                VertexId member;
            };
            std::vector<Candidate> candidates;
            const Point3 endpoint_pt = mesh.point(g);
            for (VertexId member : mesh.group_members(g)) {
                for (EdgeId e : mesh.vertex_edges(member)) {
                    if (!mesh.is_nonmanifold_edge(e)) continue;
                    const auto& rec = mesh.edge(e);
                    if (ring.contains_edge(rec.a, rec.b)) continue;
                    if (ctx && ctx->edge_owner) {
                        VertexId ka = rec.a, kb = rec.b;
                        if (ka > kb) std::swap(ka, kb);
                        auto it = ctx->edge_owner->find({ka, kb});
                        if (it != ctx->edge_owner->end() && it->second != ctx->self) {
                            continue;  // already part of another ring
                        }
                    }
                    const VertexId other = rec.a == member ? rec.b : rec.a;
                    candidates.push_back({distance(endpoint_pt, mesh.point(other)), other, member});
                }
            }
            if (candidates.empty()) continue;

            if (plane) {
                for (const auto& c : candidates) {
                    if (point_plane_distance(mesh.point(c.vertex), *plane) >
                        cfg.coplanar_tolerance) {
                        ring.open_reason = "noncoplanar-candidates";
                        ring.closed = false;
                        return false;
                    }
                }
            }
            std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
                return a.dist < b.dist || (a.dist == b.dist && a.vertex < b.vertex);
            });

            // neighbor on the ring at this endpoint, for the test triangle
            VertexId neighbor = kInvalidId;
            for (const auto& e : ring.edges) {
                const VertexId gf = mesh.duplicate_group(e.from);
                const VertexId gt = mesh.duplicate_group(e.to);
                if (gf == g || gt == g) {
                    neighbor = gf == g ? e.to : e.from;
                    break;
                }
            }
            for (const auto& c : candidates) {
                if (neighbor != kInvalidId &&
                    alpha_covered_by_incident_face(mesh, cfg, neighbor, c.member, c.vertex)) {
                    continue;
                }
                ring.edges.push_back({c.member, c.vertex, RingEdgeOrigin::NonmanifoldCompleted});
                if (ctx && ctx->edge_owner) {
                    VertexId ka = c.member, kb = c.vertex;
                    if (ka > kb) std::swap(ka, kb);
                    (*ctx->edge_owner)[{ka, kb}] = ctx->self;
                }
                progress = true;
                break;
            }
            if (progress) break;
        }
        if (!progress) {
            if (ring.open_reason.empty()) ring.open_reason = "no-progress";
            return false;
        }
    }
    const auto closure = detail::ring_closure(ring, mesh);
    ring.closed = closure.closed;
    if (!ring.closed && ring.open_reason.empty()) ring.open_reason = "iteration-limit";
    return ring.closed;
}

struct ReorderOutcome {
    bool ok = false;
    BorderRing ring;
    VertexId offending = kInvalidId;
    std::string error;
};

/*
 * Order a closed edge multiset into one directed cycle: consecutive
 * edges share a duplicate group, the cycle starts at the ring's lowest
 * vertex id and proceeds toward its lower-id neighbor. A branching
 * vertex (degree above two) or leftover edges mean the set is not a
 * single cycle.
 */
inline ReorderOutcome reorder_ring(const BorderRing& ring, const SurfaceMesh& mesh) {
    ReorderOutcome out;
    if (ring.edges.empty()) {
        out.error = "empty ring";
        return out;
    }
    std::map<VertexId, std::vector<size_t>> incident;  // group -> edge indices
    for (size_t i = 0; i < ring.edges.size(); ++i) {
        incident[mesh.duplicate_group(ring.edges[i].from)].push_back(i);
        incident[mesh.duplicate_group(ring.edges[i].to)].push_back(i);
    }
    for (const auto& [g, edges] : incident) {
        if (edges.size() != 2) {
            out.offending = g;
            out.error = "ambiguous ring: branching vertex";
            return out;
        }
    }

    VertexId lowest = ring.edges[0].from;
    for (const auto& e : ring.edges) lowest = std::min({lowest, e.from, e.to});
    const VertexId start_group = mesh.duplicate_group(lowest);

    // choose the first edge toward the lower-id neighbor
    auto other_end = [&](size_t i, VertexId at_group) {
        const auto& e = ring.edges[i];
        return mesh.duplicate_group(e.from) == at_group ? e.to : e.from;
    };
    const auto& first_choices = incident[start_group];
    size_t cur_edge = first_choices[0];
    if (other_end(first_choices[1], start_group) < other_end(first_choices[0], start_group)) {
        cur_edge = first_choices[1];
    }

    std::vector<char> used(ring.edges.size(), 0);
    VertexId at = start_group;
    BorderRing ordered;
    for (size_t step = 0; step < ring.edges.size(); ++step) {
        const auto& e = ring.edges[cur_edge];
        used[cur_edge] = 1;
        RingEdge directed = e;
        if (mesh.duplicate_group(e.from) != at) std::swap(directed.from, directed.to);
        ordered.edges.push_back(directed);
        at = mesh.duplicate_group(directed.to);
        if (at == start_group) break;
        size_t nxt = ring.edges.size();
        for (size_t i : incident[at]) {
            if (!used[i]) nxt = std::min(nxt, i);
        }
        if (nxt == ring.edges.size()) {
            out.offending = at;
            out.error = "ambiguous ring: dead end";
            return out;
        }
        cur_edge = nxt;
    }
    for (size_t i = 0; i < ring.edges.size(); ++i) {
        if (!used[i]) {
            out.offending = std::min(ring.edges[i].from, ring.edges[i].to);
            out.error = "ambiguous ring: multiple cycles";
            return out;
        }
    }
    ordered.closed = true;
    out.ok = true;
    out.ring = std::move(ordered);
    return out;
}

/*
 * Phase 2 entry point: trace candidate rings, complete open ones with
 * both strategies, reorder the closed ones. Closed rings become true
 * holes; everything else lands in the rejected list with a reason.
 */
inline HoleSet detect_holes(const SurfaceMesh& mesh, const RepairConfig& cfg) {
    HoleSet out;
    TraceResult tr = trace_border_rings(mesh, cfg);

    CompletionContext ctx;
    ctx.rejected_edges = &tr.rejected_edges;
    ctx.edge_owner = &tr.edge_owner;
    ctx.rings = &tr.rings;
    ctx.merged_away = &tr.merged_away;

    // complete every open ring first; merges may absorb later arcs
    for (size_t r = 0; r < tr.rings.size(); ++r) {
        if (tr.merged_away[r] || tr.rings[r].edges.empty()) continue;
        BorderRing& ring = tr.rings[r];
        ctx.self = static_cast<int>(r);
        if (!ring.closed) complete_ring_overlap(ring, mesh, cfg, &ctx);
        if (tr.merged_away[r]) continue;
        if (!ring.closed) complete_ring_nonmanifold(ring, mesh, cfg, &ctx);
    }

    for (size_t r = 0; r < tr.rings.size(); ++r) {
        if (tr.merged_away[r]) continue;
        BorderRing& ring = tr.rings[r];
        if (ring.edges.empty()) {
            if (tr.rejected_pairs[r] > 0) {
                RejectedCandidate rc;
                rc.reason = RejectReason::PseudoHole;
                rc.detail = "all virtual triangles covered by incident faces";
                rc.rejected_pairs = tr.rejected_pairs[r];
                out.rejected.push_back(std::move(rc));
            }
            continue;
        }
        if (!ring.closed) {
            RejectedCandidate rc;
            rc.ring = ring;
            rc.reason = RejectReason::Unclosable;
            rc.detail = ring.open_reason.empty() ? "open" : ring.open_reason;
            rc.rejected_pairs = tr.rejected_pairs[r];
            out.rejected.push_back(std::move(rc));
            continue;
        }
        ReorderOutcome ro = reorder_ring(ring, mesh);
        if (!ro.ok) {
            RejectedCandidate rc;
            rc.ring = ring;
            rc.reason = RejectReason::Unclosable;
            rc.detail = ro.error;
            rc.rejected_pairs = tr.rejected_pairs[r];
            out.rejected.push_back(std::move(rc));
            continue;
        }
        out.true_holes.push_back(std::move(ro.ring));
    }
    return out;
}

}  // namespace lodfill
