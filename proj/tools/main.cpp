// Command-line front end: repair / validate / gen over Wavefront OBJ
// building meshes.

#include <CLI11.hpp>

#include "lodfill/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Hole detection and filling for piecewise-planar building meshes"};
    app.require_subcommand(1);

    lodfill::RepairOptions repair_opt;
    auto* rep = app.add_subcommand("repair", "Detect and fill holes, write a repaired OBJ");
    rep->add_option("inputs", repair_opt.inputs, "input OBJ file(s)")->required();
    rep->add_option("-o,--output", repair_opt.output,
                    "output OBJ path (directory for multi-file batches)");
    rep->add_option("--report", repair_opt.report_path, "write a JSON repair report here");
    rep->add_option("--annotate", repair_opt.annotate_path,
                    "write remaining border edges as OBJ line elements");
    rep->add_option("--eps-distance", repair_opt.config.eps_distance,
                    "covering-test distance threshold, meters")
        ->capture_default_str();
    rep->add_option("--eps-area-ratio", repair_opt.config.eps_area_ratio,
                    "covering-test area-ratio threshold")
        ->capture_default_str();
    rep->add_option("--eps-duplicate", repair_opt.config.eps_duplicate,
                    "duplicate-vertex radius, meters")
        ->capture_default_str();
    rep->add_option("-j,--jobs", repair_opt.jobs, "parallel workers for multi-file batches")
        ->capture_default_str();
    rep->add_flag("--deterministic", repair_opt.stable_report,
                  "zero out timing fields so reports are byte-stable");

    lodfill::ValidateOptions validate_opt;
    auto* val = app.add_subcommand("validate", "Print topology and defect diagnostics");
    val->add_option("input", validate_opt.input, "input OBJ file")->required();
    val->add_flag("--json", validate_opt.json, "emit JSON instead of text");
    val->add_option("--annotate", validate_opt.annotate_path,
                    "write border edges as OBJ line elements");
    val->add_option("--eps-duplicate", validate_opt.config.eps_duplicate,
                    "duplicate-vertex radius, meters")
        ->capture_default_str();

    lodfill::GenOptions gen_opt;
    auto* gen = app.add_subcommand("gen", "Generate a defect fixture from a recipe file");
    gen->add_option("recipe", gen_opt.recipe_path, "recipe text file")->required();
    gen->add_option("-o,--output", gen_opt.output, "output OBJ path")->required();
    gen->add_option("--truth", gen_opt.truth_path, "write the ground-truth JSON here");

    CLI11_PARSE(app, argc, argv);

    try {
        repair_opt.config.validate();
        validate_opt.config.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    if (rep->parsed()) return lodfill::run_repair(repair_opt);
    if (val->parsed()) return lodfill::run_validate(validate_opt);
    return lodfill::run_gen(gen_opt);
}
