#include "plypart/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace plypart {

namespace {

using json = nlohmann::json;  // std::map-backed: object keys serialize sorted

constexpr double kPi = 3.14159265358979323846;
constexpr int kFormatVersion = 1;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
    return *it;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

int integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<int>();
}

Polygon vertices(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of [x, y] pairs");
    Polygon poly;
    for (size_t i = 0; i < v.size(); ++i) {
        const json& pt = v[i];
        const std::string ppath = path + "[" + std::to_string(i) + "]";
        if (!pt.is_array() || pt.size() != 2) fail(ppath, "expected [x, y]");
        poly.push_back({number(pt[0], ppath + "[0]"), number(pt[1], ppath + "[1]")});
    }
    return poly;
}

json vertices_to_json(const Polygon& poly) {
    json out = json::array();
    for (const Point2& p : poly) out.push_back(json::array({p.x, p.y}));
    return out;
}

ManufacturingConfig config_from_json(const json& j, const std::string& path) {
    ManufacturingConfig cfg;
    cfg.spool_width = number(require(j, "spool_width", path), path + ".spool_width");
    cfg.overlap_width = number(require(j, "overlap_width", path), path + ".overlap_width");
    cfg.min_subply_width = number(require(j, "min_subply_width", path), path + ".min_subply_width");
    if (j.contains("flimsy_min")) cfg.flimsy_min = number(j["flimsy_min"], path + ".flimsy_min");
    if (j.contains("small_min")) cfg.small_min = number(j["small_min"], path + ".small_min");
    if (j.contains("tolerance")) cfg.tolerance = number(j["tolerance"], path + ".tolerance");
    if (j.contains("max_overlaps")) cfg.max_overlaps = integer(j["max_overlaps"], path + ".max_overlaps");
    if (j.contains("base_overlaps")) cfg.base_overlaps = integer(j["base_overlaps"], path + ".base_overlaps");
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
    return cfg;
}

json config_to_json(const ManufacturingConfig& cfg) {
    json j;
    j["spool_width"] = cfg.spool_width;
    j["overlap_width"] = cfg.overlap_width;
    j["min_subply_width"] = cfg.min_subply_width;
    j["flimsy_min"] = cfg.flimsy_min;
    j["small_min"] = cfg.small_min;
    if (cfg.tolerance) j["tolerance"] = *cfg.tolerance;
    if (cfg.max_overlaps) j["max_overlaps"] = *cfg.max_overlaps;
    j["base_overlaps"] = cfg.base_overlaps;
    return j;
}

CostParams cost_from_json(const json& j, const std::string& path) {
    CostParams p;
    p.a_mat = number(require(j, "a_mat", path), path + ".a_mat");
    p.b_mat = number(require(j, "b_mat", path), path + ".b_mat");
    p.seam_cost = number(require(j, "seam_cost", path), path + ".seam_cost");
    if (j.contains("mean_subply_length")) {
        p.mean_subply_length = number(j["mean_subply_length"], path + ".mean_subply_length");
    }
    if (j.contains("spool_min")) p.spool_min = number(j["spool_min"], path + ".spool_min");
    if (j.contains("spool_max")) p.spool_max = number(j["spool_max"], path + ".spool_max");
    return p;
}

json cost_to_json(const CostParams& p) {
    json j;
    j["a_mat"] = p.a_mat;
    j["b_mat"] = p.b_mat;
    j["seam_cost"] = p.seam_cost;
    if (p.mean_subply_length) j["mean_subply_length"] = *p.mean_subply_length;
    j["spool_min"] = p.spool_min;
    j["spool_max"] = p.spool_max;
    return j;
}

Project project_from_json(const json& j, const std::string& path) {
    Project project;
    const int version = integer(require(j, "format_version", path), path + ".format_version");
    if (version != kFormatVersion) {
        fail(path + ".format_version", "unsupported version " + std::to_string(version));
    }
    project.config = config_from_json(require(j, "config", path), path + ".config");
    if (j.contains("cost_params") && !j["cost_params"].is_null()) {
        project.cost_params = cost_from_json(j["cost_params"], path + ".cost_params");
    }
    const json& plies = require(j, "plies", path);
    if (!plies.is_array()) fail(path + ".plies", "expected an array");
    std::set<std::string> ids;
    for (size_t i = 0; i < plies.size(); ++i) {
        const std::string ppath = path + ".plies[" + std::to_string(i) + "]";
        const json& pj = plies[i];
        std::string id = require(pj, "id", ppath).is_string()
                             ? pj["id"].get<std::string>()
                             : (fail(ppath + ".id", "expected a string"), "");
        if (!ids.insert(id).second) fail(ppath + ".id", "duplicate ply id '" + id + "'");
        const int stack = integer(require(pj, "stack_index", ppath), ppath + ".stack_index");
        const double deg =
            number(require(pj, "fiber_angle_degrees", ppath), ppath + ".fiber_angle_degrees");
        if (!(deg >= 0.0 && deg < 180.0)) {
            fail(ppath + ".fiber_angle_degrees", "must be in [0, 180)");
        }
        Polygon poly = vertices(require(pj, "vertices", ppath), ppath + ".vertices");
        try {
            project.plies.emplace_back(id, std::move(poly), deg * kPi / 180.0, stack);
        } catch (const std::exception& e) {
            fail(ppath, e.what());
        }
    }
    if (j.contains("stayouts")) {
        const json& zones = j["stayouts"];
        if (!zones.is_array()) fail(path + ".stayouts", "expected an array");
        for (size_t i = 0; i < zones.size(); ++i) {
            const std::string zpath = path + ".stayouts[" + std::to_string(i) + "]";
            Polygon poly = vertices(require(zones[i], "vertices", zpath), zpath + ".vertices");
            if (poly.size() < 3) fail(zpath + ".vertices", "need at least 3 vertices");
            project.zones.push_back({std::move(poly)});
        }
    }
    return project;
}

json project_to_json(const Project& project) {
    json j;
    j["format_version"] = kFormatVersion;
    j["config"] = config_to_json(project.config);
    if (project.cost_params) j["cost_params"] = cost_to_json(*project.cost_params);
    json plies = json::array();
    for (const Ply& ply : project.plies) {
        json pj;
        pj["id"] = ply.id();
        pj["stack_index"] = ply.stack_index();
        pj["fiber_angle_degrees"] = ply.fiber_angle() * 180.0 / kPi;
        pj["vertices"] = vertices_to_json(ply.polygon());
        plies.push_back(std::move(pj));
    }
    j["plies"] = std::move(plies);
    json zones = json::array();
    for (const StayOutZone& zone : project.zones) {
        json zj;
        zj["vertices"] = vertices_to_json(zone.polygon);
        zones.push_back(std::move(zj));
    }
    j["stayouts"] = std::move(zones);
    return j;
}

json design_to_json(const Design& design) {
    json j;
    j["objective"] = design.objective;
    json seams = json::object();
    for (const auto& [id, offsets] : design.seams) seams[id] = offsets;
    j["seams"] = std::move(seams);
    return j;
}

Design design_from_json(const json& j, const std::string& path) {
    Design d;
    d.objective = number(require(j, "objective", path), path + ".objective");
    const json& seams = require(j, "seams", path);
    if (!seams.is_object()) fail(path + ".seams", "expected an object");
    for (const auto& [id, arr] : seams.items()) {
        if (!arr.is_array()) fail(path + ".seams." + id, "expected an array");
        std::vector<double> offsets;
        for (size_t i = 0; i < arr.size(); ++i) {
            offsets.push_back(number(arr[i], path + ".seams." + id));
        }
        d.seams[id] = std::move(offsets);
    }
    return d;
}

json breakdown_to_json(const CostBreakdown& c) {
    json j;
    j["a_d"] = c.a_d;
    j["a_l"] = c.a_l;
    j["a_trim"] = c.a_trim;
    j["material_cost"] = c.material_cost;
    j["seam_cost"] = c.seam_cost;
    j["total"] = c.total;
    j["n_seam"] = c.n_seam;
    return j;
}

CostBreakdown breakdown_from_json(const json& j, const std::string& path) {
    CostBreakdown c;
    c.a_d = number(require(j, "a_d", path), path + ".a_d");
    c.a_l = number(require(j, "a_l", path), path + ".a_l");
    c.a_trim = number(require(j, "a_trim", path), path + ".a_trim");
    c.material_cost = number(require(j, "material_cost", path), path + ".material_cost");
    c.seam_cost = number(require(j, "seam_cost", path), path + ".seam_cost");
    c.total = number(require(j, "total", path), path + ".total");
    c.n_seam = integer(require(j, "n_seam", path), path + ".n_seam");
    return c;
}

json nest_to_json(const NestLayout& n) {
    json j;
    j["spool_width"] = n.spool_width;
    j["used_length"] = n.used_length;
    j["trim_area"] = n.trim_area;
    json placements = json::array();
    for (const NestPlacement& p : n.placements) {
        json pj;
        pj["piece"] = p.piece;
        pj["position"] = p.position;
        pj["rotated"] = p.rotated;
        pj["mirrored"] = p.mirrored;
        placements.push_back(std::move(pj));
    }
    j["placements"] = std::move(placements);
    json polys = json::array();
    for (const Polygon& poly : n.placed_polygons) polys.push_back(vertices_to_json(poly));
    j["polygons"] = std::move(polys);
    return j;
}

NestLayout nest_from_json(const json& j, const std::string& path) {
    NestLayout n;
    n.spool_width = number(require(j, "spool_width", path), path + ".spool_width");
    n.used_length = number(require(j, "used_length", path), path + ".used_length");
    n.trim_area = number(require(j, "trim_area", path), path + ".trim_area");
    const json& placements = require(j, "placements", path);
    if (!placements.is_array()) fail(path + ".placements", "expected an array");
    for (size_t i = 0; i < placements.size(); ++i) {
        const std::string ppath = path + ".placements[" + std::to_string(i) + "]";
        const json& pj = placements[i];
        NestPlacement p;
        const json& piece = require(pj, "piece", ppath);
        if (!piece.is_string()) fail(ppath + ".piece", "expected a string");
        p.piece = piece.get<std::string>();
        p.position = number(require(pj, "position", ppath), ppath + ".position");
        p.rotated = require(pj, "rotated", ppath).get<bool>();
        p.mirrored = require(pj, "mirrored", ppath).get<bool>();
        n.placements.push_back(std::move(p));
    }
    const json& polys = require(j, "polygons", path);
    if (!polys.is_array()) fail(path + ".polygons", "expected an array");
    for (size_t i = 0; i < polys.size(); ++i) {
        n.placed_polygons.push_back(
            vertices(polys[i], path + ".polygons[" + std::to_string(i) + "]"));
    }
    return n;
}

json report_to_json(const SearchReport& r) {
    json j;
    j["nodes_explored"] = r.nodes_explored;
    j["lp_solves"] = r.lp_solves;
    j["outcome"] = r.outcome == SearchOutcome::Complete ? "complete" : "infeasible";
    return j;
}

SearchReport report_from_json(const json& j, const std::string& path) {
    SearchReport r;
    r.nodes_explored = require(j, "nodes_explored", path).get<long long>();
    r.lp_solves = require(j, "lp_solves", path).get<long long>();
    const json& outcome = require(j, "outcome", path);
    if (!outcome.is_string()) fail(path + ".outcome", "expected a string");
    const std::string s = outcome.get<std::string>();
    if (s == "complete") r.outcome = SearchOutcome::Complete;
    else if (s == "infeasible") r.outcome = SearchOutcome::Infeasible;
    else fail(path + ".outcome", "unknown outcome '" + s + "'");
    return r;
}

json result_to_json(const Result& r) {
    json j;
    j["format_version"] = kFormatVersion;
    j["project"] = project_to_json(r.project);
    j["complete"] = r.complete;
    j["design"] = design_to_json(r.design);
    // Redundant but convenient: the standard-form line of every seam, derived
    // from the embedded plies.  Ignored on load (offsets are authoritative).
    json lines = json::object();
    for (const Ply& ply : r.project.plies) {
        const auto it = r.design.seams.find(ply.id());
        if (it == r.design.seams.end()) continue;
        json per_ply = json::array();
        for (double offset : it->second) {
            const LineStd line = seam_to_line(ply, {offset});
            per_ply.push_back(json::array({line.a, line.b, line.c}));
        }
        lines[ply.id()] = std::move(per_ply);
    }
    j["design"]["lines"] = std::move(lines);
    json bundles = json::array();
    for (const auto& ids : r.bundle_ids) bundles.push_back(ids);
    j["bundles"] = std::move(bundles);
    json reports = json::array();
    for (const SearchReport& rep : r.reports) reports.push_back(report_to_json(rep));
    j["reports"] = std::move(reports);
    json viols = json::array();
    for (const Violation& v : r.violations) {
        json vj;
        vj["kind"] = v.kind;
        vj["detail"] = v.detail;
        vj["amount"] = v.amount;
        viols.push_back(std::move(vj));
    }
    j["violations"] = std::move(viols);
    if (r.cost) j["cost"] = breakdown_to_json(*r.cost);
    if (r.nest) j["nest"] = nest_to_json(*r.nest);
    return j;
}

Result result_from_json(const json& j, const std::string& path) {
    Result r;
    const int version = integer(require(j, "format_version", path), path + ".format_version");
    if (version != kFormatVersion) {
        fail(path + ".format_version", "unsupported version " + std::to_string(version));
    }
    r.project = project_from_json(require(j, "project", path), path + ".project");
    r.complete = require(j, "complete", path).get<bool>();
    r.design = design_from_json(require(j, "design", path), path + ".design");
    const json& bundles = require(j, "bundles", path);
    if (!bundles.is_array()) fail(path + ".bundles", "expected an array");
    for (const json& b : bundles) {
        std::vector<std::string> ids;
        for (const json& id : b) ids.push_back(id.get<std::string>());
        r.bundle_ids.push_back(std::move(ids));
    }
    const json& reports = require(j, "reports", path);
    for (size_t i = 0; i < reports.size(); ++i) {
        r.reports.push_back(
            report_from_json(reports[i], path + ".reports[" + std::to_string(i) + "]"));
    }
    if (j.contains("violations")) {
        for (const json& vj : j["violations"]) {
            Violation v;
            v.kind = require(vj, "kind", path + ".violations").get<std::string>();
            v.detail = require(vj, "detail", path + ".violations").get<std::string>();
            v.amount = number(require(vj, "amount", path + ".violations"), path + ".violations");
            r.violations.push_back(std::move(v));
        }
    }
    if (j.contains("cost") && !j["cost"].is_null()) {
        r.cost = breakdown_from_json(j["cost"], path + ".cost");
    }
    if (j.contains("nest") && !j["nest"].is_null()) {
        r.nest = nest_from_json(j["nest"], path + ".nest");
    }
    return r;
}

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << text;
    if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace

Project load_project(const std::string& path) {
    return project_from_json(parse_file(path), path);
}

void save_project(const Project& project, const std::string& path) {
    write_file(path, project_to_json_text(project));
}

Project project_from_json_text(const std::string& text) {
    try {
        return project_from_json(json::parse(text), "project");
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("project: ") + e.what());
    }
}

std::string project_to_json_text(const Project& project) {
    return project_to_json(project).dump(2) + "\n";
}

Result load_result(const std::string& path) {
    return result_from_json(parse_file(path), path);
}

void save_result(const Result& result, const std::string& path) {
    write_file(path, result_to_json_text(result));
}

Result result_from_json_text(const std::string& text) {
    try {
        return result_from_json(json::parse(text), "result");
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("result: ") + e.what());
    }
}

std::string result_to_json_text(const Result& result) {
    return result_to_json(result).dump(2) + "\n";
}

}  // namespace plypart
