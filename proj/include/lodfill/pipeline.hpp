#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "lodfill/obj_io.hpp"
#include "lodfill/repair.hpp"
#include "lodfill/synthkit.hpp"

namespace lodfill {

struct RepairOptions {
    std::vector<std::string> inputs;
    std::string output;       // file for one input, directory for several
    std::string report_path;  // likewise
    std::string annotate_path;
    RepairConfig config;
    int jobs = 1;
    bool stable_report = false;  // zero out timing fields for byte-stable output
};

struct ValidateOptions {
    std::string input;
    std::string annotate_path;
    bool json = false;
    RepairConfig config;
};

struct GenOptions {
    std::string recipe_path;
    std::string output;
    std::string truth_path;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << data;
}

// border edges of the mesh as OBJ line elements, viewer-agnostic
inline std::string annotate_borders(const SurfaceMesh& mesh) {
    std::string out;
    char buf[96];
    for (const Point3& p : mesh.points()) {
        const int n = std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", p.x, p.y, p.z);
        out.append(buf, n);
    }
    for (HalfedgeId h : mesh.border_halfedges()) {
        const int n = std::snprintf(buf, sizeof buf, "l %d %d\n", mesh.halfedge(h).origin + 1,
                                    mesh.target(h) + 1);
        out.append(buf, n);
    }
    return out;
}

inline std::string output_path_for(const std::string& requested, const std::string& input,
                                   size_t input_count, const char* suffix) {
    namespace fs = std::filesystem;
    if (requested.empty()) return {};
    if (input_count == 1 && !fs::is_directory(requested)) return requested;
    return (fs::path(requested) / (fs::path(input).stem().string() + suffix)).string();
}

}  // namespace detail

/// Repair one file; returns the process exit status contribution
/// (0 filled, 1 input error, 2 holes remain).
inline int repair_one(const std::string& input, const std::string& output,
                      const std::string& report_path, const std::string& annotate_path,
                      const RepairConfig& cfg, bool stable_report, std::ostream& err) {
    SurfaceMesh mesh;
    try {
        mesh = load_obj(detail::read_file(input));
    } catch (const std::exception& e) {
        err << "error: " << input << ": " << e.what() << "\n";
        return 1;
    }
    try {
        RepairOutcome outcome = repair(std::move(mesh), cfg);
        outcome.report.input = input;
        if (!output.empty()) detail::write_file(output, save_obj(outcome.mesh));
        if (!report_path.empty()) {
            detail::write_file(report_path,
                               report_to_json(outcome.report, !stable_report).dump(2) + "\n");
        }
        if (!annotate_path.empty()) {
            detail::write_file(annotate_path, detail::annotate_borders(outcome.mesh));
        }
        return outcome.report.exit_status;
    } catch (const std::exception& e) {
        err << "error: " << input << ": " << e.what() << "\n";
        return 1;
    }
}

/// Batch front end: one worker per file, outputs written independently.
inline int run_repair(const RepairOptions& opt, std::ostream& err = std::cerr) {
    if (opt.inputs.empty()) {
        err << "error: no input files\n";
        return 1;
    }
    std::vector<int> status(opt.inputs.size(), 0);
    const int jobs = std::max(1, opt.jobs);
    std::mutex err_mutex;
    std::vector<std::thread> workers;
    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= opt.inputs.size()) break;
            const std::string& input = opt.inputs[i];
            const std::string out =
                detail::output_path_for(opt.output, input, opt.inputs.size(), ".repaired.obj");
            const std::string rep =
                detail::output_path_for(opt.report_path, input, opt.inputs.size(), ".report.json");
            const std::string ann = detail::output_path_for(opt.annotate_path, input,
                                                            opt.inputs.size(), ".borders.obj");
            std::ostringstream local_err;
            status[i] = repair_one(input, out, rep, ann, opt.config, opt.stable_report, local_err);
            if (!local_err.str().empty()) {
                std::lock_guard<std::mutex> lock(err_mutex);
                err << local_err.str();
            }
        }
    };
    if (jobs == 1 || opt.inputs.size() == 1) {
        work();
    } else {
        for (int t = 0; t < jobs; ++t) workers.emplace_back(work);
        for (auto& w : workers) w.join();
    }
    int rc = 0;
    for (int s : status) rc = std::max(rc, s);
    return rc;
}

inline nlohmann::ordered_json validate_to_json(SurfaceMesh& mesh, const RepairConfig& cfg) {
    const auto dup = mark_duplicates(mesh, cfg);
    const auto marks = mark_overlapping_edges(mesh, cfg);
    const auto topo = euler_and_borders(mesh);
    int nonmanifold_edges = 0;
    for (EdgeId e = 0; e < static_cast<EdgeId>(mesh.edge_count()); ++e) {
        nonmanifold_edges += mesh.is_nonmanifold_edge(e) ? 1 : 0;
    }
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["vertices"] = mesh.vertex_count();
    j["faces"] = mesh.face_count();
    j["edges"] = mesh.edge_count();
    j["euler"] = topo.euler;
    j["components"] = topo.components;
    j["border_halfedges"] = topo.border_halfedges;
    j["nonmanifold_edges"] = nonmanifold_edges;
    j["duplicate_groups"] = dup.nontrivial_groups;
    j["duplicate_vertices"] = dup.grouped_vertices;
    j["overlap_marks"] = {{"degenerate", marks.degenerate},
                          {"same_endpoints", marks.same_endpoints},
                          {"collinear_distinct", marks.collinear_distinct}};
    return j;
}

inline int run_validate(const ValidateOptions& opt, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
    SurfaceMesh mesh;
    try {
        mesh = load_obj(detail::read_file(opt.input));
    } catch (const std::exception& e) {
        err << "error: " << opt.input << ": " << e.what() << "\n";
        return 1;
    }
    const auto j = validate_to_json(mesh, opt.config);
    if (opt.json) {
        out << j.dump(2) << "\n";
    } else {
        out << opt.input << "\n";
        for (const auto& [key, value] : j.items()) {
            if (key == "schema_version") continue;
            out << "  " << key << ": " << value.dump() << "\n";
        }
    }
    if (!opt.annotate_path.empty()) {
        detail::write_file(opt.annotate_path, detail::annotate_borders(mesh));
    }
    return 0;
}

inline int run_gen(const GenOptions& opt, std::ostream& err = std::cerr) {
    try {
        const auto recipe = synthkit::parse_recipe(detail::read_file(opt.recipe_path));
        const auto generated = synthkit::generate(recipe);
        detail::write_file(opt.output, save_obj(generated.mesh));
        if (!opt.truth_path.empty()) {
            nlohmann::ordered_json j;
            j["true_holes"] = generated.truth.true_holes;
            j["hole_rings"] = generated.truth.hole_rings;
            j["expected_stitched_pairs"] = generated.truth.expected_stitched_pairs;
            j["pseudo_candidates_min"] = generated.truth.pseudo_candidates_min;
            j["expect_unclosable"] = generated.truth.expect_unclosable;
            j["self_intersection_pairs_min"] = generated.truth.self_intersection_pairs_min;
            j["genus_limitation"] = generated.truth.genus_limitation;
            j["split_ring_limitation"] = generated.truth.split_ring_limitation;
            j["watertight_after_repair"] = generated.truth.watertight_after_repair;
            j["expected_exit"] = generated.truth.expected_exit;
            detail::write_file(opt.truth_path, j.dump(2) + "\n");
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace lodfill
