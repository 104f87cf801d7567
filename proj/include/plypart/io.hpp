#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plypart/cost.hpp"
#include "plypart/model.hpp"
#include "plypart/search.hpp"

namespace plypart {

// Everything the solver needs, as loaded from a project file.  Fiber angles
// are degrees in the file and radians in memory.
struct Project {
    std::vector<Ply> plies;
    std::vector<StayOutZone> zones;
    ManufacturingConfig config;
    std::optional<CostParams> cost_params;
};

// Solver output plus an embedded copy of the source project, so results can
// be rendered and re-validated self-contained.  Wall-clock timings are
// intentionally never written.
struct Result {
    Project project;
    bool complete = false;
    Design design;
    std::vector<std::vector<std::string>> bundle_ids;
    std::vector<SearchReport> reports;
    std::vector<Violation> violations;
    std::optional<CostBreakdown> cost;
    std::optional<NestLayout> nest;
};

// All loaders throw std::runtime_error with a field-path diagnostic on
// malformed input.
Project load_project(const std::string& path);
void save_project(const Project& project, const std::string& path);
Project project_from_json_text(const std::string& text);
std::string project_to_json_text(const Project& project);

Result load_result(const std::string& path);
void save_result(const Result& result, const std::string& path);
Result result_from_json_text(const std::string& text);
std::string result_to_json_text(const Result& result);

}  // namespace plypart
