#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plypart/constraints.hpp"
#include "plypart/geometry.hpp"
#include "plypart/model.hpp"

namespace plypart {

// One cut piece: a ply region between consecutive seams, extended w_l/2 past
// each interior seam so adjacent pieces overlap.  The outline is stored in
// the piece-local spool frame: x along the fiber, y transverse, min corner at
// the origin.
struct SubPlyPiece {
    std::string ply_id;
    int index = 0;       // per-ply piece counter in slab order
    Polygon polygon;     // local frame (fiber = +x)
    double width = 0.0;  // transverse slab width: seam gap + overlap extensions
    double length = 0.0; // fiber-direction extent
};

struct NestPlacement {
    std::string piece;      // "<ply_id>#<index>"
    double position = 0.0;  // start offset along the spool length
    bool rotated = false;   // 180-degree rotation
    bool mirrored = false;  // flip across the fiber axis
};

struct NestLayout {
    std::vector<NestPlacement> placements;
    double spool_width = 0.0;
    double used_length = 0.0;
    double trim_area = 0.0;
    // Final outlines inside the band [0, used_length] x [0, spool_width],
    // aligned with `placements`; kept for rendering and overlap checks.
    std::vector<Polygon> placed_polygons;
};

struct CostBreakdown {
    double a_d = 0.0;     // summed ply outline area
    double a_l = 0.0;     // overlap band area
    double a_trim = 0.0;  // estimated trim loss
    double material_cost = 0.0;
    double seam_cost = 0.0;
    double total = 0.0;
    int n_seam = 0;       // interior seams
};

// Cuts every ply of the bundle along its seams.  Disconnected clip results
// become separate pieces.
std::vector<SubPlyPiece> extract_subplies(const Design& design, const Bundle& bundle,
                                          const ManufacturingConfig& config);

// Rectangle approximation of the trim loss: per adjacent seam pair, the slack
// (spool width - gap) times the mean sub-ply length.
double trim_loss_estimate(const Design& design, const Bundle& bundle,
                          const ManufacturingConfig& config, const CostParams& params);

// Linear cost model: (A_d + A_l + A_trim) * (a_mat * w_s + b_mat)
// + n_seam * seam_cost.
CostBreakdown estimate_cost(const Design& design, const Bundle& bundle,
                            const ManufacturingConfig& config, const CostParams& params);

// Sequential strip nesting: pieces are laid fiber-along-spool, bottom
// aligned; each step picks the remaining (piece, configuration) leaving the
// smallest gap area against the previously placed piece.
NestLayout nest(const std::vector<SubPlyPiece>& pieces, double spool_width);

struct SweepPoint {
    double spool_width = 0.0;
    bool feasible = false;
    Design design;
    CostBreakdown cost;
};

// Evaluates the partition + cost model on a uniform spool-width grid between
// params.spool_min and params.spool_max.  Infeasible widths are flagged, not
// fatal.
std::vector<SweepPoint> spool_sweep(const Bundle& bundle, const std::vector<StayOutZone>& zones,
                                    const ManufacturingConfig& config, const CostParams& params,
                                    int steps);

}  // namespace plypart
