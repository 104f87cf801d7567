#pragma once

#include <string>

#include "plypart/io.hpp"

namespace plypart {

// Deterministic SVG renderers (fixed decimal formatting, stable element
// order, no timestamps).

// Ply outlines with every seam line, overlap bands around interior seams,
// and stay-out zones filled dark.
std::string render_seams_svg(const Result& result);

// Spool band with the nested pieces; the exposed band background is the
// trim.  Requires result.nest.
std::string render_nest_svg(const Result& result);

// Stacked-overlap intensity: all overlap strips clipped to their plies,
// darker where more strips stack, with a maximum-depth annotation.
std::string render_overlaps_svg(const Result& result);

// Maximum number of mutually intersecting overlap strips (area > 1e-12)
// across the whole design; the overlaps renderer annotates this value.
int max_overlap_depth(const Result& result);

}  // namespace plypart
