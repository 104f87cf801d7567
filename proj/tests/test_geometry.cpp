#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "plypart/geometry.hpp"

using namespace plypart;

namespace {
constexpr double kPi = 3.14159265358979323846;

Polygon unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

Polygon box(double x0, double y0, double x1, double y1) {
    return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

LineStd through_origin(double nx, double ny) {
    const double n = std::sqrt(nx * nx + ny * ny);
    return {nx / n, ny / n, 0.0};
}
}  // namespace

TEST_CASE("project_polygon pinned extents") {
    Interval a = project_polygon(unit_square(), {1, 0});
    CHECK(a.lo == doctest::Approx(0.0));
    CHECK(a.hi == doctest::Approx(1.0));

    Interval b = project_polygon(box(0.4, 0.2, 0.6, 0.5), {1, 0});
    CHECK(b.lo == doctest::Approx(0.4));
    CHECK(b.hi == doctest::Approx(0.6));

    const double s = std::sqrt(0.5);
    Interval c = project_polygon(unit_square(), {s, s});
    CHECK(c.lo == doctest::Approx(0.0));
    CHECK(c.hi == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("project_polygon translation property") {
    const Polygon poly{{0.1, 0.2}, {1.3, 0.4}, {0.9, 1.5}};
    const Point2 axis{0.6, 0.8};
    const Point2 t{2.5, -1.75};
    Polygon moved = poly;
    for (Point2& p : moved) p = p + t;
    const Interval base = project_polygon(poly, axis);
    const Interval shifted = project_polygon(moved, axis);
    const double d = dot(t, axis);
    CHECK(shifted.lo == doctest::Approx(base.lo + d).epsilon(1e-10));
    CHECK(shifted.hi == doctest::Approx(base.hi + d).epsilon(1e-10));
}

TEST_CASE("line_intersection pinned cases") {
    const LineStd x0{1, 0, 0};   // x = 0
    const LineStd y0{0, 1, 0};   // y = 0
    const LineStd x1{1, 0, -1};  // x = 1
    const LineStd y2{0, 1, -2};  // y = 2

    auto p = line_intersection(x0, y0);
    REQUIRE(p.has_value());
    CHECK(p->x == doctest::Approx(0.0));
    CHECK(p->y == doctest::Approx(0.0));

    auto q = line_intersection(x1, y2);
    REQUIRE(q.has_value());
    CHECK(q->x == doctest::Approx(1.0));
    CHECK(q->y == doctest::Approx(2.0));

    CHECK_FALSE(line_intersection(x0, x1).has_value());
}

TEST_CASE("clip_polygon pinned cases") {
    CHECK(total_area(clip_polygon(unit_square(), unit_square())) == doctest::Approx(1.0));
    CHECK(clip_polygon(unit_square(), box(2, 0, 3, 1)).empty());
    CHECK(total_area(clip_polygon(unit_square(), box(0.5, 0.5, 1.5, 1.5))) ==
          doctest::Approx(0.25));
}

TEST_CASE("clip_polygon with a non-convex clipper") {
    const Polygon ell{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
    CHECK(total_area(clip_polygon(box(0, 0, 2, 2), ell)) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(total_area(clip_polygon(ell, ell)) == doctest::Approx(3.0).epsilon(1e-9));
    // Area never exceeds either operand.
    const double a = total_area(clip_polygon(ell, box(0.5, 0.5, 1.5, 1.5)));
    CHECK(a <= 1.0 + 1e-9);
    CHECK(a == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("triangulate covers the polygon area") {
    const Polygon ell{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
    double sum = 0.0;
    for (const Polygon& tri : triangulate(ell)) sum += std::abs(polygon_area(tri));
    CHECK(sum == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("triple_overlap_area zero cases") {
    const Polygon domain = box(-5, -5, 5, 5);
    const Strip s1{{0, 1, 0}, 0.05};
    const Strip s2{{0, 1, -0.5}, 0.05};
    const Strip s3{{0, 1, -1.0}, 0.05};
    CHECK(triple_overlap_area(s1, s2, s3, domain) == doctest::Approx(0.0));

    // Coincident pair plus a parallel strip well away from both.
    const Strip far{{0, 1, -4.0}, 0.05};
    CHECK(triple_overlap_area(s1, s1, far, domain) == doctest::Approx(0.0));
}

TEST_CASE("triple_overlap_area agrees with Monte-Carlo sampling") {
    const Polygon domain = box(-5, -5, 5, 5);
    const double half = 0.05;  // band width 0.1
    const Strip s1{through_origin(1, 0), half};    // x = 0
    const Strip s2{through_origin(0, 1), half};    // y = 0
    const Strip s3{through_origin(-1, 1), half};   // y = x

    const double area = triple_overlap_area(s1, s2, s3, domain);
    CHECK(area > 0.0);

    // All points of the intersection satisfy |x| <= half and |y| <= half, so
    // sampling a slightly larger box is exhaustive.
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> coord(-0.06, 0.06);
    const int samples = 1000000;
    int hits = 0;
    auto inside = [](const Strip& s, const Point2& p) {
        return std::abs(signed_distance(s.center, p)) <= s.half_width;
    };
    for (int i = 0; i < samples; ++i) {
        const Point2 p{coord(rng), coord(rng)};
        if (inside(s1, p) && inside(s2, p) && inside(s3, p)) ++hits;
    }
    const double mc = 0.12 * 0.12 * hits / samples;
    CHECK(area == doctest::Approx(mc).epsilon(0.02));
}

TEST_CASE("triple_overlap_area is symmetric in its strips") {
    const Polygon domain = box(-2, -2, 2, 2);
    const Strip a{through_origin(1, 0.2), 0.04};
    const Strip b{{0, 1, -0.1}, 0.06};
    const Strip c{through_origin(-1, 1.3), 0.05};
    const double ref = triple_overlap_area(a, b, c, domain);
    CHECK(triple_overlap_area(b, a, c, domain) == doctest::Approx(ref).epsilon(1e-9));
    CHECK(triple_overlap_area(c, b, a, domain) == doctest::Approx(ref).epsilon(1e-9));
    CHECK(triple_overlap_area(b, c, a, domain) == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("seam_polygon_intersects") {
    const Ply ply("p", unit_square(), kPi / 2, 0);
    CHECK(seam_polygon_intersects(ply, {0.5}));
    CHECK_FALSE(seam_polygon_intersects(ply, {1.5}));
    CHECK_FALSE(seam_polygon_intersects(ply, {0.0}));
}

TEST_CASE("classify_vertices pinned cases") {
    // Diamond: tips on the x axis taper against vertical seams.
    const Ply diamond("d", {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, kPi / 2, 0);
    VertexClasses dc = classify_vertices(diamond);
    REQUIRE(dc.small_piece.size() == 2);
    CHECK(dc.flimsy.empty());
    const Polygon& dpoly = diamond.polygon();
    for (int idx : dc.small_piece) {
        CHECK(std::abs(dpoly[static_cast<size_t>(idx)].y) == doctest::Approx(0.0));
        CHECK(std::abs(dpoly[static_cast<size_t>(idx)].x) == doctest::Approx(1.0));
    }

    // Axis-aligned rectangle: every corner has a fiber-parallel edge.
    const Ply rect("r", box(0, 0, 2, 1), kPi / 2, 0);
    VertexClasses rc = classify_vertices(rect);
    CHECK(rc.small_piece.empty());
    CHECK(rc.flimsy.empty());

    // L-shape: the reflex corner is flagged flimsy.
    const Ply ell("l", {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}, kPi / 2, 0);
    VertexClasses lc = classify_vertices(ell);
    REQUIRE(lc.flimsy.size() == 1);
    const Point2 reflex = ell.polygon()[static_cast<size_t>(lc.flimsy[0])];
    CHECK(reflex.x == doctest::Approx(1.0));
    CHECK(reflex.y == doctest::Approx(1.0));

    // Disjoint classes on every example seen above.
    for (int s : lc.small_piece) {
        for (int f : lc.flimsy) CHECK(s != f);
    }
}

TEST_CASE("line_polygon_spans") {
    // Horizontal line through the middle of the unit square: one unit span.
    auto spans = line_polygon_spans({0, 0.5}, {1, 0}, unit_square());
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].hi - spans[0].lo == doctest::Approx(1.0));

    // Across the notch of a U-shape: two separate spans.
    const Polygon u{{0, 0}, {3, 0}, {3, 2}, {2, 2}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
    auto two = line_polygon_spans({0, 1.5}, {1, 0}, u);
    REQUIRE(two.size() == 2);
    CHECK(two[0].hi - two[0].lo == doctest::Approx(1.0));
    CHECK(two[1].hi - two[1].lo == doctest::Approx(1.0));

    // Line missing the polygon: no spans.
    CHECK(line_polygon_spans({0, 5.0}, {1, 0}, unit_square()).empty());
}

TEST_CASE("interval helpers") {
    auto merged = merge_intervals({{0.0, 0.2}, {0.1, 0.4}, {0.6, 0.7}});
    REQUIRE(merged.size() == 2);
    CHECK(merged[0].lo == doctest::Approx(0.0));
    CHECK(merged[0].hi == doctest::Approx(0.4));

    // Open bands leave closed remainders, including degenerate points at
    // shared endpoints.
    auto rest = subtract_open_intervals({0.0, 1.0}, {{0.2, 0.5}, {0.5, 0.8}});
    REQUIRE(rest.size() == 3);
    CHECK(rest[0].hi == doctest::Approx(0.2));
    CHECK(rest[1].lo == doctest::Approx(0.5));
    CHECK(rest[1].hi == doctest::Approx(0.5));
    CHECK(rest[2].lo == doctest::Approx(0.8));

    auto all = subtract_open_intervals({0.0, 1.0}, {{-0.5, 1.5}});
    CHECK(all.empty());
}

TEST_CASE("bounding_box") {
    const BBox bb = bounding_box({{-1, 2}, {3, -0.5}, {0.5, 4}});
    CHECK(bb.min_x == doctest::Approx(-1.0));
    CHECK(bb.min_y == doctest::Approx(-0.5));
    CHECK(bb.max_x == doctest::Approx(3.0));
    CHECK(bb.max_y == doctest::Approx(4.0));
}
