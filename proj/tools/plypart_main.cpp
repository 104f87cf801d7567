// Command-line front end: partition projects, sweep spool widths, render
// results to SVG, re-validate result files and benchmark the two search
// strategies.  Exit codes: 0 success, 1 input error, 2 infeasible/invalid.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "plypart/cost.hpp"
#include "plypart/io.hpp"
#include "plypart/render.hpp"
#include "plypart/search.hpp"
#include "plypart/synthetic.hpp"

namespace {

using namespace plypart;

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

// Rebuilds Bundle objects from stored ply-id groups; falls back to one
// bundle holding the whole layup when no grouping is recorded.
std::vector<Bundle> bundles_from_ids(const Project& project,
                                     const std::vector<std::vector<std::string>>& bundle_ids) {
    std::map<std::string, const Ply*> by_id;
    for (const Ply& ply : project.plies) by_id[ply.id()] = &ply;
    std::vector<Bundle> bundles;
    if (bundle_ids.empty()) {
        bundles.push_back(Bundle{project.plies});
        return bundles;
    }
    for (const auto& ids : bundle_ids) {
        Bundle bundle;
        for (const std::string& id : ids) {
            auto it = by_id.find(id);
            if (it == by_id.end())
                throw std::runtime_error("result references unknown ply id '" + id + "'");
            bundle.plies.push_back(*it->second);
        }
        bundles.push_back(std::move(bundle));
    }
    return bundles;
}

// Seam table restricted to one bundle's plies, so cross-bundle entries never
// look like structural errors to the validator.
Design design_for_bundle(const Design& design, const Bundle& bundle) {
    Design sub;
    for (const Ply& ply : bundle.plies) {
        auto it = design.seams.find(ply.id());
        if (it != design.seams.end()) sub.seams[it->first] = it->second;
    }
    sub.recompute_objective();
    return sub;
}

std::vector<Violation> validate_result(const Project& project, const Result& result) {
    std::vector<Violation> all;
    const std::vector<Bundle> bundles = bundles_from_ids(project, result.bundle_ids);
    for (size_t b = 0; b < bundles.size(); ++b) {
        const Design sub = design_for_bundle(result.design, bundles[b]);
        for (Violation v : validate(sub, bundles[b], project.zones, project.config)) {
            v.detail = "bundle " + std::to_string(b) + ": " + v.detail;
            all.push_back(std::move(v));
        }
    }
    return all;
}

int cmd_partition(const std::string& project_path, int beam_width, const std::string& out_path,
                  bool sort_orientation) {
    const Project project = load_project(project_path);
    if (project.plies.empty()) throw std::runtime_error("project has no plies");

    const LayupResult lr = partition_layup(project.plies, project.zones, project.config,
                                           beam_width, sort_orientation);
    Result result;
    result.project = project;
    result.complete = lr.complete;
    result.design = lr.design;
    result.bundle_ids = lr.bundle_ids;
    result.reports = lr.reports;
    result.violations = validate_result(project, result);

    if (lr.complete && project.cost_params) {
        const Bundle whole{project.plies};
        result.cost = estimate_cost(result.design, whole, project.config, *project.cost_params);
        result.nest = nest(extract_subplies(result.design, whole, project.config),
                           project.config.spool_width);
    }
    save_result(result, out_path);

    if (!lr.complete) {
        std::cerr << "infeasible: " << lr.message << "\n";
        return 2;
    }
    if (!result.violations.empty()) {
        std::cerr << "complete but invalid: " << result.violations.size() << " violation(s)\n";
        return 2;
    }
    std::cout << "complete: " << result.design.seams.size() << " plies, objective "
              << fmt("%.9f", result.design.objective) << ", written to " << out_path << "\n";
    return 0;
}

int cmd_sweep(const std::string& project_path, int steps, const std::string& out_path) {
    const Project project = load_project(project_path);
    if (!project.cost_params) throw std::runtime_error("sweep requires cost_params in the project");
    const CostParams& params = *project.cost_params;
    if (!(params.spool_min > 0.0) || !(params.spool_min < params.spool_max))
        throw std::runtime_error("sweep requires 0 < cost_params.spool_min < cost_params.spool_max");
    if (steps < 2) throw std::runtime_error("sweep requires --steps >= 2");

    std::string csv = "w_s,n_seams,A_l,A_trim,material_cost,seam_cost,total,status\n";
    bool any_ok = false;
    for (int i = 0; i < steps; ++i) {
        const double w =
            params.spool_min + (params.spool_max - params.spool_min) * i / (steps - 1);
        ManufacturingConfig cfg = project.config;
        cfg.spool_width = w;
        bool ok = false;
        CostBreakdown cost;
        try {
            cfg.validate();
            const LayupResult lr = partition_layup(project.plies, project.zones, cfg, 1, false);
            if (lr.complete) {
                cost = estimate_cost(lr.design, Bundle{project.plies}, cfg, params);
                ok = true;
            }
        } catch (const std::exception&) {
            ok = false;
        }
        if (ok) {
            any_ok = true;
            csv += fmt("%.6f", w) + "," + std::to_string(cost.n_seam) + "," +
                   fmt("%.6f", cost.a_l) + "," + fmt("%.6f", cost.a_trim) + "," +
                   fmt("%.6f", cost.material_cost) + "," + fmt("%.6f", cost.seam_cost) + "," +
                   fmt("%.6f", cost.total) + ",ok\n";
        } else {
            csv += fmt("%.6f", w) + ",,,,,,,infeasible\n";
        }
    }
    write_text_file(out_path, csv);
    std::cout << "sweep: " << steps << " widths written to " << out_path << "\n";
    return any_ok ? 0 : 2;
}

int cmd_render(const std::string& result_path, const std::string& mode,
               const std::string& out_path) {
    const Result result = load_result(result_path);
    std::string svg;
    if (mode == "seams") {
        svg = render_seams_svg(result);
    } else if (mode == "nest") {
        svg = render_nest_svg(result);
    } else if (mode == "overlaps") {
        svg = render_overlaps_svg(result);
    } else {
        throw std::runtime_error("unknown render mode '" + mode +
                                 "' (expected seams|nest|overlaps)");
    }
    write_text_file(out_path, svg);
    std::cout << "rendered " << mode << " to " << out_path << "\n";
    return 0;
}

int cmd_validate(const std::string& result_path, const std::string& project_path) {
    const Result result = load_result(result_path);
    const Project project = load_project(project_path);

    std::map<std::string, int> result_ids, project_ids;
    for (const auto& [id, seams] : result.design.seams) result_ids[id] = 1;
    for (const Ply& ply : project.plies) project_ids[ply.id()] = 1;
    for (const auto& [id, one] : result_ids) {
        if (!project_ids.count(id))
            throw std::runtime_error("result ply '" + id + "' is not in the project");
    }

    const std::vector<Violation> violations = validate_result(project, result);
    nlohmann::ordered_json report = nlohmann::ordered_json::array();
    for (const Violation& v : violations) {
        report.push_back({{"kind", v.kind}, {"detail", v.detail}, {"amount", v.amount}});
    }
    std::cout << report.dump(2) << "\n";
    return violations.empty() ? 0 : 2;
}

int cmd_bench(int trials, unsigned seed, int beam_width, const std::string& out_path) {
    if (trials < 1) throw std::runtime_error("bench requires --trials >= 1");
    std::mt19937 rng(seed);
    const ManufacturingConfig config = benchmark_config();

    std::string csv = "trial,greedy_total,beam_total,greedy_nodes,beam_nodes,equal\n";
    int equal_count = 0;
    for (int t = 0; t < trials; ++t) {
        const SyntheticCase sc = make_synthetic_case(rng);
        const Bundle bundle{{sc.ply}};
        const PartitionOutcome greedy = greedy_partition(bundle, sc.zones, config);
        const PartitionOutcome beam = beam_partition(bundle, sc.zones, config, beam_width);
        const double greedy_total = -greedy.design.objective;
        const double beam_total = -beam.design.objective;
        const bool equal = std::abs(greedy_total - beam_total) <= 1e-7;
        equal_count += equal ? 1 : 0;
        csv += std::to_string(t) + "," + fmt("%.9f", greedy_total) + "," +
               fmt("%.9f", beam_total) + "," + std::to_string(greedy.report.nodes_explored) +
               "," + std::to_string(beam.report.nodes_explored) + "," + (equal ? "1" : "0") +
               "\n";
    }
    write_text_file(out_path, csv);
    std::cout << "equal " << equal_count << "/" << trials << " ("
              << fmt("%.1f", 100.0 * equal_count / trials) << "%)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Composite ply partitioning toolkit"};
    app.require_subcommand(1);

    // The library is single-threaded; any requested cap is honored as-is.
    if (const char* threads = std::getenv("PLYPART_THREADS")) (void)threads;

    std::string project_path, result_path, out_path, mode = "seams";
    int beam_width = 1, steps = 16, trials = 20;
    unsigned seed = 0;
    bool sort_orientation = false;

    CLI::App* partition = app.add_subcommand("partition", "Partition a project into sub-plies");
    partition->add_option("project", project_path, "project file")->required();
    partition->add_option("--beam-width", beam_width, "beam width (1 = greedy)");
    partition->add_option("--seed", seed, "random seed (search is deterministic)");
    partition->add_option("--out", out_path, "result file")->default_val("result.json");
    partition->add_flag("--sort-orientation", sort_orientation,
                        "group plies by fiber angle before bundling");

    CLI::App* sweep = app.add_subcommand("sweep", "Cost curve over a spool-width range");
    sweep->add_option("project", project_path, "project file")->required();
    sweep->add_option("--steps", steps, "grid points");
    sweep->add_option("--out", out_path, "CSV file")->default_val("sweep.csv");

    CLI::App* render = app.add_subcommand("render", "Render a result file to SVG");
    render->add_option("result", result_path, "result file")->required();
    render->add_option("--mode", mode, "seams|nest|overlaps");
    render->add_option("--out", out_path, "SVG file")->default_val("render.svg");

    CLI::App* validate = app.add_subcommand("validate", "Re-validate a result against a project");
    validate->add_option("result", result_path, "result file")->required();
    validate->add_option("project", project_path, "project file")->required();

    CLI::App* bench = app.add_subcommand("bench", "Greedy vs beam on synthetic cases");
    bench->add_option("--trials", trials, "number of synthetic cases");
    bench->add_option("--seed", seed, "random seed");
    bench->add_option("--beam-width", beam_width, "beam width for the beam runs")
        ->default_val(10000);
    bench->add_option("--out", out_path, "CSV file")->default_val("bench.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(partition))
            return cmd_partition(project_path, beam_width, out_path, sort_orientation);
        if (app.got_subcommand(sweep)) return cmd_sweep(project_path, steps, out_path);
        if (app.got_subcommand(render)) return cmd_render(result_path, mode, out_path);
        if (app.got_subcommand(validate)) return cmd_validate(result_path, project_path);
        if (app.got_subcommand(bench)) return cmd_bench(trials, seed, beam_width, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
