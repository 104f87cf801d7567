#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

// Core value types for the ply partitioning toolkit.
//
// Conventions used throughout:
//  - Polygons are simple, counter-clockwise, in design-plane coordinates.
//  - A ply's fiber direction for angle t is d = (cos t, sin t); the transverse
//    axis is d_perp = (-sin t, cos t).  Fiber angles live in [0, pi).
//  - Seam offsets are nonnegative distances along d_perp measured from the
//    ply origin (the vertex with minimal d_perp projection).  The first seam
//    of every ply sits at offset 0 and coincides with the ply boundary, so it
//    cuts nothing.

namespace plypart {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2() = default;
    Point2(double px, double py) : x(px), y(py) {}

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Point2& o) const { return x == o.x && y == o.y; }
};

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& a) { return std::sqrt(dot(a, a)); }

using Polygon = std::vector<Point2>;

// Infinite line in standard form a*x + b*y + c = 0 with unit normal (a, b).
struct LineStd {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

// A straight cut across a ply, parameterized by its transverse offset.
struct Seam {
    double offset = 0.0;  // distance from the ply origin along d_perp, in [0, width]
};

struct StayOutZone {
    Polygon polygon;  // simple polygon; seams (dilated by w_l/2) must avoid it
};

// One ply of the layup: a flattened polygon plus its fiber angle and the
// position in the stacking sequence.
class Ply {
public:
    Ply() = default;
    // Validates the polygon (>= 3 vertices, simple, nonzero area), normalizes
    // winding to CCW, folds the fiber angle into [0, pi) and precomputes the
    // transverse frame.  Throws std::invalid_argument on bad input.
    Ply(std::string id, Polygon polygon, double fiber_angle, int stack_index);

    const std::string& id() const { return id_; }
    const Polygon& polygon() const { return polygon_; }
    double fiber_angle() const { return fiber_angle_; }
    int stack_index() const { return stack_index_; }

    Point2 fiber_dir() const { return fiber_dir_; }
    Point2 transverse_dir() const { return transverse_dir_; }
    // Origin vertex: minimal d_perp projection, ties broken by smaller fiber
    // projection, then by vertex index.
    Point2 origin() const { return origin_; }
    // d_perp projection of the origin; seam offset x corresponds to the
    // absolute transverse coordinate proj0() + x.
    double proj0() const { return proj0_; }
    double width() const { return width_; }

private:
    std::string id_;
    Polygon polygon_;
    double fiber_angle_ = 0.0;
    int stack_index_ = 0;
    Point2 fiber_dir_{1.0, 0.0};
    Point2 transverse_dir_{0.0, 1.0};
    Point2 origin_;
    double proj0_ = 0.0;
    double width_ = 0.0;
};

// Manufacturing parameters shared by all plies.
struct ManufacturingConfig {
    double spool_width = 0.0;       // w_s: transverse width of the raw tape spool
    double overlap_width = 0.0;     // w_l: width of the overlap band at every cut seam
    double min_subply_width = 0.0;  // w_min: smallest allowed distance between seams
    double flimsy_min = 0.0;        // keep-away distance from flimsy (reflex) vertices
    double small_min = 0.0;         // keep-away distance from small-piece (convex) vertices

    // Overlap stacking budget: either a tolerance ratio in (0, 1] or an
    // explicit cap on the number of mutually intersecting overlaps.
    std::optional<double> tolerance;  // delta = N / M
    std::optional<int> max_overlaps;  // N, overrides tolerance when set
    int base_overlaps = 2;            // n: unavoidable overlap stack depth

    void validate() const;  // throws std::invalid_argument on inconsistent values
};

// Parameters of the manufacturing cost model.
struct CostParams {
    double a_mat = 0.0;      // material price slope per unit spool width
    double b_mat = 0.0;      // material price intercept
    double seam_cost = 0.0;  // fixed cost per interior seam
    std::optional<double> mean_subply_length;  // override for the trim estimate
    double spool_min = 0.0;  // sweep range for spool_sweep
    double spool_max = 0.0;
};

// A partitioning solution: for every ply, the sorted seam offsets (leading 0
// is the non-cutting boundary seam).  The objective is the negated sum of
// last-seam offsets, i.e. smaller is better.
struct Design {
    std::map<std::string, std::vector<double>> seams;
    double objective = 0.0;

    void recompute_objective();
};

// Transverse extent of the ply polygon: max - min projection onto d_perp.
double ply_width(const Ply& ply);

// Line of the seam at the given offset on the given ply, in standard form.
// The normal equals d_perp, so c decreases linearly with the offset:
// c = -(d_perp . origin) - offset.
LineStd seam_to_line(const Ply& ply, const Seam& seam);

// Signed area (positive for CCW) and a simplicity test used by validators.
double polygon_area(const Polygon& poly);
bool polygon_is_simple(const Polygon& poly);

}  // namespace plypart
