#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "plypart/model.hpp"

using namespace plypart;

namespace {
constexpr double kPi = 3.14159265358979323846;

Polygon unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }
}  // namespace

TEST_CASE("ply_width projection extents") {
    CHECK(ply_width(Ply("a", unit_square(), kPi / 2, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ply_width(Ply("b", unit_square(), kPi / 4, 0)) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(ply_width(Ply("c", {{0, 0}, {1, 0}, {0, 1}}, 0.0, 0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ply_width invariances") {
    const Polygon poly{{0.2, 0.1}, {1.7, 0.4}, {1.1, 1.3}, {0.0, 0.9}};
    const double angle = 0.7;
    const double base = ply_width(Ply("p", poly, angle, 0));

    Polygon shifted = poly;
    for (Point2& p : shifted) p = p + Point2{3.5, -2.25};
    CHECK(ply_width(Ply("q", shifted, angle, 0)) == doctest::Approx(base).epsilon(1e-9));

    const double rot = 0.45;
    Polygon rotated;
    for (const Point2& p : poly) {
        rotated.push_back({p.x * std::cos(rot) - p.y * std::sin(rot),
                           p.x * std::sin(rot) + p.y * std::cos(rot)});
    }
    CHECK(ply_width(Ply("r", rotated, angle + rot, 0)) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("origin picks the minimal transverse vertex with deterministic ties") {
    // Fiber along +y: d_perp = (-1, 0), so the minimal projection is the
    // largest x; the tie at x=0 goes to the smaller fiber projection (y).
    const Ply ply("p", {{-1, 0}, {0, 0}, {0, 1}, {-1, 1}}, kPi / 2, 0);
    CHECK(ply.origin() == Point2{0, 0});
    CHECK(ply.width() == doctest::Approx(1.0));

    const Ply flat("q", unit_square(), 0.0, 0);
    CHECK(flat.origin() == Point2{0, 0});
}

TEST_CASE("seam_to_line pinned examples") {
    const Ply vertical("p", {{-1, 0}, {0, 0}, {0, 1}, {-1, 1}}, kPi / 2, 0);
    const LineStd l1 = seam_to_line(vertical, {0.5});
    CHECK(l1.a == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(l1.b == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(l1.c == doctest::Approx(-0.5).epsilon(1e-12));

    const Ply horizontal("q", unit_square(), 0.0, 0);
    const LineStd l2 = seam_to_line(horizontal, {0.3});
    CHECK(l2.a == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(l2.b == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(l2.c == doctest::Approx(-0.3).epsilon(1e-12));

    const Ply diag("r", {{0, 0}, {1, 2}, {2, 5}, {0, 3}}, kPi / 4, 0);
    REQUIRE(diag.origin() == Point2{0, 0});
    const LineStd l3 = seam_to_line(diag, {1.0});
    CHECK(l3.a == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-12));
    CHECK(l3.b == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(l3.c == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("seam line passes through its anchor point for any offset") {
    const Ply ply("p", {{0.3, -0.2}, {2.1, 0.4}, {1.5, 1.8}, {0.1, 1.2}}, 1.1, 0);
    for (double offset : {0.0, 0.17, 0.5, 1.23}) {
        const LineStd line = seam_to_line(ply, {offset});
        const Point2 anchor = ply.origin() + ply.transverse_dir() * offset;
        CHECK(std::abs(line.a * anchor.x + line.b * anchor.y + line.c) < 1e-10);
    }
}

TEST_CASE("fiber angle folds into [0, pi)") {
    const Ply a("a", unit_square(), kPi + 0.3, 0);
    CHECK(a.fiber_angle() == doctest::Approx(0.3).epsilon(1e-12));
    const Ply b("b", unit_square(), kPi, 0);
    CHECK(b.fiber_angle() == doctest::Approx(0.0).epsilon(1e-12));
    const Ply c("c", unit_square(), -kPi / 3, 0);
    CHECK(c.fiber_angle() == doctest::Approx(2 * kPi / 3).epsilon(1e-9));
}

TEST_CASE("ply constructor rejects bad polygons and normalizes winding") {
    CHECK_THROWS_AS(Ply("x", {{0, 0}, {1, 0}}, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(Ply("x", {{0, 0}, {1, 1}, {2, 2}}, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(Ply("x", {{0, 0}, {1, 1}, {1, 0}, {0, 1}}, 0.0, 0), std::invalid_argument);

    const Ply cw("cw", {{0, 0}, {0, 1}, {1, 1}, {1, 0}}, 0.0, 0);
    CHECK(polygon_area(cw.polygon()) == doctest::Approx(1.0));
}

TEST_CASE("polygon area and simplicity") {
    CHECK(polygon_area(unit_square()) == doctest::Approx(1.0));
    CHECK(polygon_area({{0, 0}, {0, 1}, {1, 1}, {1, 0}}) == doctest::Approx(-1.0));
    CHECK(polygon_is_simple(unit_square()));
    CHECK_FALSE(polygon_is_simple({{0, 0}, {1, 1}, {1, 0}, {0, 1}}));
}

TEST_CASE("design objective is the negated sum of last offsets") {
    Design design;
    design.seams["a"] = {0.0, 0.3};
    design.seams["b"] = {0.0, 0.2, 0.5};
    design.recompute_objective();
    CHECK(design.objective == -0.8);

    design.seams["c"] = {0.0};
    design.recompute_objective();
    CHECK(design.objective == -0.8);
}

TEST_CASE("manufacturing config validation") {
    ManufacturingConfig ok;
    ok.spool_width = 0.3;
    ok.overlap_width = 0.05;
    ok.min_subply_width = 0.1;
    CHECK_NOTHROW(ok.validate());

    ManufacturingConfig wide_lap = ok;
    wide_lap.overlap_width = 0.3;
    CHECK_THROWS_AS(wide_lap.validate(), std::invalid_argument);

    ManufacturingConfig wide_min = ok;
    wide_min.min_subply_width = 0.26;
    CHECK_THROWS_AS(wide_min.validate(), std::invalid_argument);

    ManufacturingConfig bad_tol = ok;
    bad_tol.tolerance = 1.5;
    CHECK_THROWS_AS(bad_tol.validate(), std::invalid_argument);
    bad_tol.tolerance = 1.0;
    CHECK_NOTHROW(bad_tol.validate());
}
