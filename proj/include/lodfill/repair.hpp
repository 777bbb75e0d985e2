#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "lodfill/config.hpp"
#include "lodfill/holedetect.hpp"
#include "lodfill/preprocess.hpp"
#include "lodfill/remesh.hpp"
#include "lodfill/surface_mesh.hpp"

#include <json.hpp>

namespace lodfill {

struct HoleEntry {
    std::vector<VertexId> vertices;  // ring vertex ids, ascending
    int ring_vertices = 0;
    int edges = 0;
    int traversed = 0;
    int overlap_completed = 0;
    int nonmanifold_completed = 0;
    FillResult fill;
};

struct RejectedEntry {
    std::string reason;
    std::string detail;
    std::vector<VertexId> vertices;
    int edges = 0;
};

struct MeshStats {
    size_t vertices = 0;
    size_t faces = 0;
    int euler = 0;
    int border_halfedges = 0;
    int components = 0;
};

struct RepairReport {
    int schema_version = 1;
    std::string input;
    RepairConfig config;
    MeshStats before, after;
    PreprocessReport preprocess;
    std::vector<HoleEntry> holes;
    std::vector<RejectedEntry> rejected;
    int holes_detected = 0;
    int holes_filled = 0;
    int holes_unfillable = 0;
    int pseudo_candidates = 0;
    int faces_added_fill = 0;
    int post_fill_stitched = 0;
    double ms_preprocess = 0, ms_detect = 0, ms_remesh = 0, ms_total = 0;
    int exit_status = 0;
};

struct RepairOutcome {
    SurfaceMesh mesh;
    RepairReport report;
    HoleSet holes;
    std::vector<FillResult> fills;
};

namespace detail {

inline MeshStats mesh_stats(const SurfaceMesh& mesh) {
    MeshStats s;
    s.vertices = mesh.vertex_count();
    s.faces = mesh.face_count();
    const auto t = euler_and_borders(mesh);
    s.euler = t.euler;
    s.border_halfedges = t.border_halfedges;
    s.components = t.components;
    return s;
}

}  // namespace detail

/*
 * The full three-phase pipeline on an in-memory mesh: preprocess,
 * detect, fill, then one more stitching pass so freshly inserted
 * patches weld to duplicate-group counterparts along completed ring
 * sections. Exit status 0 means every detected hole was filled, 2 means
 * holes remain (unfillable rings or failed fills).
 */
inline RepairOutcome repair(SurfaceMesh mesh, const RepairConfig& cfg) {
    using clock = std::chrono::steady_clock;
    const auto ms_since = [](clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };

    RepairOutcome out;
    out.report.config = cfg;
    const auto t_total = clock::now();
    if (mesh.needs_rebuild()) mesh.rebuild_connectivity();
    out.report.before = detail::mesh_stats(mesh);

    auto t0 = clock::now();
    out.report.preprocess = preprocess(mesh, cfg);
    out.report.ms_preprocess = ms_since(t0);

    t0 = clock::now();
    out.holes = detect_holes(mesh, cfg);
    out.report.ms_detect = ms_since(t0);

    // deterministic fill order: ascending lowest ring vertex id
    auto lowest = [](const BorderRing& r) {
        VertexId lo = r.edges.empty() ? kInvalidId : r.edges[0].from;
        for (const auto& e : r.edges) lo = std::min({lo, e.from, e.to});
        return lo;
    };
    std::sort(out.holes.true_holes.begin(), out.holes.true_holes.end(),
              [&](const BorderRing& a, const BorderRing& b) { return lowest(a) < lowest(b); });

    t0 = clock::now();
    for (const auto& ring : out.holes.true_holes) {
        out.fills.push_back(fill_hole(mesh, ring, cfg));
    }
    out.report.post_fill_stitched = stitch_pseudo_holes(mesh, cfg, nullptr);
    out.report.ms_remesh = ms_since(t0);

    out.report.holes_detected = static_cast<int>(out.holes.true_holes.size());
    for (size_t i = 0; i < out.holes.true_holes.size(); ++i) {
        const BorderRing& ring = out.holes.true_holes[i];
        HoleEntry entry;
        entry.edges = static_cast<int>(ring.edges.size());
        entry.vertices = ring.vertex_ids();
        entry.ring_vertices = static_cast<int>(entry.vertices.size());
        entry.traversed = ring.count_origin(RingEdgeOrigin::Traversed);
        entry.overlap_completed = ring.count_origin(RingEdgeOrigin::OverlapCompleted);
        entry.nonmanifold_completed = ring.count_origin(RingEdgeOrigin::NonmanifoldCompleted);
        entry.fill = out.fills[i];
        out.report.holes.push_back(entry);
        if (out.fills[i].filled) ++out.report.holes_filled;
        out.report.faces_added_fill += out.fills[i].faces_added;
    }
    for (const auto& rc : out.holes.rejected) {
        RejectedEntry entry;
        entry.reason = rc.reason == RejectReason::PseudoHole ? "pseudo-hole" : "unclosable";
        entry.detail = rc.detail;
        entry.vertices = rc.ring.vertex_ids();
        entry.edges = static_cast<int>(rc.ring.edges.size());
        out.report.rejected.push_back(entry);
        if (rc.reason == RejectReason::PseudoHole) ++out.report.pseudo_candidates;
        else ++out.report.holes_unfillable;
    }

    out.report.after = detail::mesh_stats(mesh);
    out.report.ms_total = ms_since(t_total);
    const bool all_filled = out.report.holes_filled == out.report.holes_detected;
    out.report.exit_status = (all_filled && out.report.holes_unfillable == 0) ? 0 : 2;
    out.mesh = std::move(mesh);
    return out;
}

inline nlohmann::ordered_json report_to_json(const RepairReport& r, bool include_timings) {
    nlohmann::ordered_json j;
    j["schema_version"] = r.schema_version;
    j["input"] = r.input;
    j["config"] = {{"eps_distance", r.config.eps_distance},
                   {"eps_area_ratio", r.config.eps_area_ratio},
                   {"eps_duplicate", r.config.eps_duplicate},
                   {"coplanar_tolerance", r.config.coplanar_tolerance},
                   {"max_completion_iterations", r.config.max_completion_iterations}};
    auto stats = [](const MeshStats& s) {
        return nlohmann::ordered_json{{"vertices", s.vertices},
                                      {"faces", s.faces},
                                      {"euler", s.euler},
                                      {"border_halfedges", s.border_halfedges},
                                      {"components", s.components}};
    };
    j["input_mesh"] = stats(r.before);
    j["preprocess"] = {
        {"self_intersection_pairs", r.preprocess.self_intersection_pairs},
        {"faces_remeshed", r.preprocess.faces_remeshed},
        {"faces_added", r.preprocess.remesh_faces_added},
        {"degenerate_subtriangles_discarded", r.preprocess.degenerate_subtriangles_discarded},
        {"stitched_pairs", r.preprocess.stitched_pairs},
        {"stitch_ambiguities", r.preprocess.stitch_ambiguities},
        {"duplicate_groups", r.preprocess.duplicates.nontrivial_groups},
        {"duplicate_vertices", r.preprocess.duplicates.grouped_vertices},
        {"overlap_marks",
         {{"degenerate", r.preprocess.overlaps.degenerate},
          {"same_endpoints", r.preprocess.overlaps.same_endpoints},
          {"collinear_distinct", r.preprocess.overlaps.collinear_distinct}}}};
    nlohmann::ordered_json holes = nlohmann::ordered_json::array();
    for (const auto& h : r.holes) {
        holes.push_back({{"ring_vertices", h.ring_vertices},
                         {"vertices", h.vertices},
                         {"edges", h.edges},
                         {"traversed", h.traversed},
                         {"overlap_completed", h.overlap_completed},
                         {"nonmanifold_completed", h.nonmanifold_completed},
                         {"filled", h.fill.filled},
                         {"faces_added", h.fill.faces_added},
                         {"rejected_degenerate", h.fill.rejected_degenerate},
                         {"rejected_self_intersecting", h.fill.rejected_self_intersecting},
                         {"faces_withheld", h.fill.faces_withheld},
                         {"plane_residual", h.fill.plane_residual},
                         {"fail_reason", h.fill.fail_reason}});
    }
    nlohmann::ordered_json rejected = nlohmann::ordered_json::array();
    for (const auto& rc : r.rejected) {
        rejected.push_back({{"reason", rc.reason},
                            {"detail", rc.detail},
                            {"vertices", rc.vertices},
                            {"edges", rc.edges}});
    }
    j["holes"] = {{"detected", r.holes_detected},
                  {"filled", r.holes_filled},
                  {"unfillable", r.holes_unfillable},
                  {"pseudo_candidates", r.pseudo_candidates},
                  {"details", holes},
                  {"rejected", rejected}};
    j["faces"] = {{"input", r.before.faces},
                  {"removed_preprocess", r.preprocess.faces_remeshed},
                  {"added_preprocess", r.preprocess.remesh_faces_added},
                  {"added_fill", r.faces_added_fill},
                  {"output", r.after.faces}};
    j["post_fill_stitched"] = r.post_fill_stitched;
    j["output_mesh"] = stats(r.after);
    j["timings_ms"] = {{"preprocess", include_timings ? r.ms_preprocess : 0.0},
                       {"detect", include_timings ? r.ms_detect : 0.0},
                       {"remesh", include_timings ? r.ms_remesh : 0.0},
                       {"total", include_timings ? r.ms_total : 0.0}};
    j["exit_status"] = r.exit_status;
    return j;
}

}  // namespace lodfill
