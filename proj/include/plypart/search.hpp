#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plypart/constraints.hpp"
#include "plypart/model.hpp"

namespace plypart {

enum class SearchOutcome { Complete, Infeasible };

// Bookkeeping for one search run.  Wall time is measured but deliberately
// kept out of any serialized artifact so outputs stay byte-reproducible.
struct SearchReport {
    long long nodes_explored = 0;
    long long lp_solves = 0;
    double wall_time_seconds = 0.0;
    SearchOutcome outcome = SearchOutcome::Infeasible;
};

// One node of the design tree: a locally re-optimized set of seams.
struct SearchNode {
    Design design;
    int generation = 0;  // total interior seam count
    bool feasible = false;
};

struct Violation {
    std::string kind;    // gap | parallel | triple_row | stayout | quality |
                         // triple_area | stayout_area | structure
    std::string detail;
    double amount = 0.0;
};

struct PartitionOutcome {
    bool complete = false;
    Design design;           // full design on success, best partial otherwise
    SearchReport report;
    std::string message;     // failing ply / window diagnostics when partial
};

// Conversions between the id-keyed Design and the bundle-ordered offset
// table used internally.  Plies absent from the design get just the
// boundary seam.
OffsetState state_from_design(const BundleContext& ctx, const Design& design);
Design design_from_state(const BundleContext& ctx, const OffsetState& state);

// Places one more seam on `ply`: tries each candidate subspace in order
// (farthest first), re-optimizing every seam of the bundle at the branch
// pattern probed from the subspace; the first feasible LP wins.
std::optional<Design> insert_seam(const BundleContext& ctx, const Design& design, int ply);

// Greedy driver: plies in bundle order, seams appended until each ply's
// remainder fits one spool width, then a full revalidation solve at the
// final branch assignment.
PartitionOutcome greedy_partition(const Bundle& bundle, const std::vector<StayOutZone>& zones,
                                  const ManufacturingConfig& config);

// Breadth-first variant keeping the best `beam_width` designs per
// generation; terminates at the first fully partitioning design.
// beam_width 1 reproduces the greedy ordering.
PartitionOutcome beam_partition(const Bundle& bundle, const std::vector<StayOutZone>& zones,
                                const ManufacturingConfig& config, int beam_width);

// Recomputes every constraint row at the design's own branch assignment plus
// the exact clipping checks (triple strip area, stay-out strip area).
// Empty result == valid design.
std::vector<Violation> validate(const Design& design, const Bundle& bundle,
                                const std::vector<StayOutZone>& zones,
                                const ManufacturingConfig& config);

// Whole-layup driver: bundles the layup, partitions each bundle
// independently, and merges the per-bundle designs.
struct LayupResult {
    bool complete = false;
    Design design;
    std::vector<std::vector<std::string>> bundle_ids;
    std::vector<SearchReport> reports;
    std::string message;
};

LayupResult partition_layup(const std::vector<Ply>& layup, const std::vector<StayOutZone>& zones,
                            const ManufacturingConfig& config, int beam_width,
                            bool sort_by_orientation = false);

}  // namespace plypart
