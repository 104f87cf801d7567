#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "plypart/model.hpp"

namespace plypart {

// Closed interval [lo, hi]; hi < lo means empty.
struct Interval {
    double lo = 0.0;
    double hi = -1.0;

    bool empty() const { return hi < lo; }
    double length() const { return empty() ? 0.0 : hi - lo; }
    bool contains(double v) const { return !empty() && v >= lo && v <= hi; }
};

// Band of material centered on a line: all points within half_width of it.
struct Strip {
    LineStd center;
    double half_width = 0.0;
};

// Interval of d_perp projections of the polygon's vertices (absolute
// coordinates; subtract the ply's proj0 for seam-offset coordinates).
Interval project_polygon(const Polygon& poly, const Point2& axis);

// Intersection point of two standard-form lines; nullopt when the normals are
// parallel (|a1*b2 - a2*b1| <= 1e-10).
std::optional<Point2> line_intersection(const LineStd& l1, const LineStd& l2);

// Signed distance of a point from a line with unit normal.
inline double signed_distance(const LineStd& l, const Point2& p) {
    return l.a * p.x + l.b * p.y + l.c;
}

// Clips a simple polygon to the half-plane signed_distance >= 0 (keep_positive)
// or <= 0.  Splits the result into its connected components, so a notched
// polygon cut across the notch yields separate pieces.  Pieces with area below
// 1e-14 are dropped.
std::vector<Polygon> clip_halfplane(const Polygon& poly, const LineStd& line, bool keep_positive);

// Boolean intersection of two simple polygons, returned as disjoint pieces
// (empty when the polygons do not overlap).  Convex clip polygons are handled
// by sequential half-plane clipping; non-convex ones by triangulating the
// clipper, in which case pieces may be split along triangulation diagonals
// (their union and total area are still exact).
std::vector<Polygon> clip_polygon(const Polygon& subject, const Polygon& clip);

// Sum of piece areas; convenience for clip results.
double total_area(const std::vector<Polygon>& pieces);

// Ear-clipping triangulation of a simple polygon (any winding).
std::vector<Polygon> triangulate(const Polygon& poly);

// Area of strip1 ^ strip2 ^ strip3 ^ domain.  The domain polygon may be
// non-convex; it is triangulated and each triangle is clipped against the
// three bands.
double triple_overlap_area(const Strip& s1, const Strip& s2, const Strip& s3,
                           const Polygon& domain);

// True iff the seam line actually crosses the ply interior, i.e. its offset
// lies strictly between 0 and the ply width.
bool seam_polygon_intersects(const Ply& ply, const Seam& seam);

// Vertex classes that constrain seam placement:
//  - small_piece: convex corners whose cone opens along the seam direction; a
//    seam closer than small_min would cut off a sliver that tapers to a point.
//  - flimsy: reflex corners where a nearby seam leaves a thin flap attached to
//    the rest of the piece.
// Edges are taken as vectors emanating from the vertex.  A convex corner with
// an edge parallel to the fiber (|d_perp projection| < 1e-9) cannot form a
// tapering cone and is skipped; at reflex corners a fiber-parallel edge still
// produces a flap, so only a strict sign disagreement disqualifies them.
struct VertexClasses {
    std::vector<int> small_piece;  // vertex indices into the polygon
    std::vector<int> flimsy;
};

VertexClasses classify_vertices(const Ply& ply);

// Portions of an infinite line inside a simple polygon, as parameter
// intervals along `dir` from `base` (sorted, disjoint).  Used for rendering
// and for measuring seam lengths.
std::vector<Interval> line_polygon_spans(const Point2& base, const Point2& dir,
                                         const Polygon& poly);

// Axis-aligned bounding box of a polygon.
struct BBox {
    double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
};
BBox bounding_box(const Polygon& poly);

bool point_in_polygon(const Point2& p, const Polygon& poly);

// Subtracts open intervals `bands` from the closed interval `window` and
// returns the remaining closed intervals (possibly degenerate single points,
// since touching a removed band's endpoint is allowed).
std::vector<Interval> subtract_open_intervals(const Interval& window,
                                              std::vector<Interval> bands);

// Merges overlapping/touching closed intervals.
std::vector<Interval> merge_intervals(std::vector<Interval> intervals);

}  // namespace plypart
