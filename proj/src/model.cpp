#include "plypart/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace plypart {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Proper segment intersection test for the simplicity check.  Shared
// endpoints between neighboring edges are handled by the caller.
bool segments_cross(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    return false;
}

}  // namespace

double polygon_area(const Polygon& poly) {
    double twice = 0.0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % n];
        twice += cross(p, q);
    }
    return 0.5 * twice;
}

bool polygon_is_simple(const Polygon& poly) {
    const size_t n = poly.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % n];
        if (norm(b - a) < 1e-12) return false;  // degenerate edge
        for (size_t j = i + 1; j < n; ++j) {
            // Skip edges sharing a vertex with edge i.
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            const Point2& c = poly[j];
            const Point2& d = poly[(j + 1) % n];
            if (segments_cross(a, b, c, d)) return false;
        }
    }
    return true;
}

Ply::Ply(std::string id, Polygon polygon, double fiber_angle, int stack_index)
    : id_(std::move(id)), polygon_(std::move(polygon)), stack_index_(stack_index) {
    if (polygon_.size() < 3) {
        throw std::invalid_argument("ply '" + id_ + "': polygon needs at least 3 vertices");
    }
    const double area = polygon_area(polygon_);
    if (std::abs(area) < 1e-12) {
        throw std::invalid_argument("ply '" + id_ + "': polygon has zero area");
    }
    if (area < 0.0) {
        std::reverse(polygon_.begin(), polygon_.end());
    }
    if (!polygon_is_simple(polygon_)) {
        throw std::invalid_argument("ply '" + id_ + "': polygon is self-intersecting");
    }

    // Fold the angle into [0, pi); a fiber direction and its negation are the
    // same physical orientation.
    double t = std::fmod(fiber_angle, kPi);
    if (t < 0.0) t += kPi;
    if (t >= kPi) t = 0.0;
    fiber_angle_ = t;
    fiber_dir_ = {std::cos(t), std::sin(t)};
    transverse_dir_ = {-std::sin(t), std::cos(t)};

    // Origin: vertex with minimal transverse projection; ties resolved by the
    // fiber projection and finally the vertex index so the choice is stable.
    size_t best = 0;
    double best_perp = dot(polygon_[0], transverse_dir_);
    double best_fiber = dot(polygon_[0], fiber_dir_);
    double max_perp = best_perp;
    for (size_t i = 1; i < polygon_.size(); ++i) {
        const double perp = dot(polygon_[i], transverse_dir_);
        const double fib = dot(polygon_[i], fiber_dir_);
        max_perp = std::max(max_perp, perp);
        if (perp < best_perp - 1e-12 ||
            (std::abs(perp - best_perp) <= 1e-12 && fib < best_fiber - 1e-12)) {
            best = i;
            best_perp = perp;
            best_fiber = fib;
        }
    }
    origin_ = polygon_[best];
    proj0_ = best_perp;
    width_ = max_perp - best_perp;
    if (width_ < 1e-12) {
        throw std::invalid_argument("ply '" + id_ + "': zero transverse extent");
    }
}

void ManufacturingConfig::validate() const {
    if (spool_width <= 0.0) throw std::invalid_argument("spool_width must be positive");
    if (overlap_width <= 0.0 || overlap_width >= spool_width) {
        throw std::invalid_argument("overlap_width must lie in (0, spool_width)");
    }
    if (min_subply_width <= 0.0 || min_subply_width > spool_width - overlap_width) {
        throw std::invalid_argument("min_subply_width must lie in (0, spool_width - overlap_width]");
    }
    if (flimsy_min < 0.0 || small_min < 0.0) {
        throw std::invalid_argument("vertex keep-away distances must be nonnegative");
    }
    if (tolerance && (*tolerance <= 0.0 || *tolerance > 1.0)) {
        throw std::invalid_argument("tolerance must lie in (0, 1]");
    }
    if (max_overlaps && *max_overlaps < 1) {
        throw std::invalid_argument("max_overlaps must be at least 1");
    }
    if (base_overlaps < 1) throw std::invalid_argument("base_overlaps must be at least 1");
}

void Design::recompute_objective() {
    double sum = 0.0;
    for (const auto& [id, offsets] : seams) {
        if (!offsets.empty()) sum += offsets.back();
    }
    objective = -sum;
}

double ply_width(const Ply& ply) { return ply.width(); }

LineStd seam_to_line(const Ply& ply, const Seam& seam) {
    const Point2 n = ply.transverse_dir();
    LineStd line;
    line.a = n.x;
    line.b = n.y;
    line.c = -(ply.proj0() + seam.offset);
    return line;
}

}  // namespace plypart
