#pragma once

#include <random>
#include <vector>

#include "plypart/model.hpp"

namespace plypart {

// Random single-ply test instances for benchmarking: one convex ply at a
// random fiber angle plus a batch of small axis-aligned square stay-out
// zones scattered over its bounding box.
struct SyntheticCase {
    Ply ply;
    std::vector<StayOutZone> zones;
};

// Draws one case from `rng`.  The ply's transverse extent is rescaled into
// [0.6, 1.2] so a handful of seams is always required; the zone count is
// uniform in [min_zones, max_zones] and square sides are uniform in
// [0.01, 0.03]; zone placements whose dilated
// projections would merge into a prohibited run longer than the seam window
// are redrawn, keeping instances inside the regime where farthest-first
// placement is globally optimal.
SyntheticCase make_synthetic_case(std::mt19937& rng, int min_zones = 1, int max_zones = 20);

// The manufacturing parameters used for benchmark cases.
ManufacturingConfig benchmark_config();

}  // namespace plypart
