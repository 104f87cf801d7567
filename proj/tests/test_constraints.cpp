#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "plypart/constraints.hpp"
#include "plypart/geometry.hpp"
#include "plypart/model.hpp"

using namespace plypart;

namespace {
constexpr double kPi = 3.14159265358979323846;

Polygon box(double x0, double y0, double x1, double y1) {
    return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

ManufacturingConfig small_config() {
    ManufacturingConfig cfg;
    cfg.spool_width = 0.3;
    cfg.overlap_width = 0.05;
    cfg.min_subply_width = 0.1;
    return cfg;
}

// 24 plies interleaving three orientations in stack order.
std::vector<Ply> interleaved_layup() {
    const double angles[3] = {0.0, kPi / 3.0, 2.0 * kPi / 3.0};
    std::vector<Ply> layup;
    for (int i = 0; i < 24; ++i) {
        layup.emplace_back("p" + std::to_string(i), box(0, 0, 2, 1), angles[i % 3], i);
    }
    return layup;
}

int distinct_orientations(const Bundle& b) {
    std::set<long long> keys;
    for (const Ply& p : b.plies) keys.insert(std::llround(p.fiber_angle() * 1e9));
    return static_cast<int>(keys.size());
}
}  // namespace

TEST_CASE("bundle_size pinned values and properties") {
    CHECK(bundle_size(24, 6, 2) == 8);
    CHECK(bundle_size(24, 24, 2) == 2);
    CHECK(bundle_size(24, 4, 2) == 12);
    CHECK(bundle_size(1, 1, 1) == 1);
    CHECK(bundle_size(0, 4, 2) == 0);
    CHECK(bundle_size(-3, 4, 2) == 0);

    CHECK_THROWS_AS(bundle_size(24, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(bundle_size(24, -1, 2), std::invalid_argument);
    CHECK_THROWS_AS(bundle_size(24, 6, 0), std::invalid_argument);

    // Capacity property: m bundles of the returned size absorb the budget.
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> mv(1, 64);
    for (int t = 0; t < 500; ++t) {
        const int M = mv(rng);
        const int N = 1 + mv(rng) % M;
        const int n = 1 + mv(rng) % N;  // n <= N keeps the cap achievable
        const int m = bundle_size(M, N, n);
        CHECK(m >= 1);
        CHECK(m <= M);
        CHECK(m * N >= M * n);
        if (m > 1) CHECK((m - 1) * N < M * n);
    }
}

TEST_CASE("resolve_max_overlaps") {
    ManufacturingConfig cfg = small_config();
    CHECK(resolve_max_overlaps(cfg, 24) == 24);  // nothing set: no cap

    cfg.max_overlaps = 4;
    CHECK(resolve_max_overlaps(cfg, 24) == 4);

    cfg.max_overlaps.reset();
    cfg.tolerance = 0.25;
    CHECK(resolve_max_overlaps(cfg, 24) == 6);

    cfg.tolerance = 1.0 / 3.0;  // 24/3 must not round down to 7
    CHECK(resolve_max_overlaps(cfg, 24) == 8);

    cfg.tolerance = 0.001;
    CHECK(resolve_max_overlaps(cfg, 24) == 1);  // clamped up

    cfg.tolerance.reset();
    cfg.max_overlaps = 100;
    CHECK(resolve_max_overlaps(cfg, 24) == 24);  // clamped down

    cfg.max_overlaps = 6;
    cfg.tolerance = 0.9;  // explicit cap wins over tolerance
    CHECK(resolve_max_overlaps(cfg, 24) == 6);
}

TEST_CASE("make_bundles sorted by orientation") {
    const std::vector<Ply> layup = interleaved_layup();

    auto bundles = make_bundles(layup, 8, true);
    REQUIRE(bundles.size() == 3);
    std::set<std::string> seen;
    for (const Bundle& b : bundles) {
        CHECK(b.plies.size() == 8);
        CHECK(distinct_orientations(b) == 1);
        for (const Ply& p : b.plies) seen.insert(p.id());
    }
    CHECK(seen.size() == 24);

    // Bundle size that does not divide the clusters: at most two orientations
    // meet in a bundle.
    auto twelve = make_bundles(layup, 12, true);
    REQUIRE(twelve.size() == 2);
    for (const Bundle& b : twelve) {
        CHECK(b.plies.size() == 12);
        CHECK(distinct_orientations(b) <= 2);
    }

    auto whole = make_bundles(layup, 24, true);
    REQUIRE(whole.size() == 1);
    CHECK(whole[0].plies.size() == 24);
}

TEST_CASE("make_bundles keeps stack order when unsorted") {
    const std::vector<Ply> layup = interleaved_layup();
    auto bundles = make_bundles(layup, 8, false);
    REQUIRE(bundles.size() == 3);
    int k = 0;
    for (const Bundle& b : bundles) {
        for (const Ply& p : b.plies) {
            CHECK(p.id() == "p" + std::to_string(k));
            ++k;
        }
    }
    CHECK(k == 24);

    CHECK_THROWS_AS(make_bundles({}, 8, true), std::invalid_argument);
    CHECK_THROWS_AS(make_bundles(layup, 0, false), std::invalid_argument);
}

TEST_CASE("stayout_intervals projects and dilates zones") {
    const Ply ply("p", box(0, 0, 1, 1), 0.0, 0);  // offsets run along +y
    ManufacturingConfig cfg = small_config();

    auto one = stayout_intervals(ply, {{box(0.4, 0.4, 0.6, 0.6)}}, cfg);
    REQUIRE(one.size() == 1);
    CHECK(one[0].lo == doctest::Approx(0.375));
    CHECK(one[0].hi == doctest::Approx(0.625));

    // A zone beyond the ply's projection range is clipped away.
    CHECK(stayout_intervals(ply, {{box(0, 2, 1, 3)}}, cfg).empty());

    // Overlapping dilated bands merge.
    auto merged = stayout_intervals(
        ply, {{box(0.1, 0.3, 0.9, 0.45)}, {box(0.2, 0.4, 0.8, 0.6)}}, cfg);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].lo == doctest::Approx(0.275));
    CHECK(merged[0].hi == doctest::Approx(0.625));

    // Bands are clipped to [0, width].
    auto low = stayout_intervals(ply, {{box(0.3, -0.5, 0.7, 0.2)}}, cfg);
    REQUIRE(low.size() == 1);
    CHECK(low[0].lo == doctest::Approx(0.0));
    CHECK(low[0].hi == doctest::Approx(0.225));
}

TEST_CASE("spool_rows bound consecutive gaps") {
    Bundle bundle{{Ply("p", box(0, 0, 1, 1), 0.0, 0)}};
    BundleContext ctx(bundle, {}, small_config());

    OffsetState boundary_only{{0.0}};
    SeamIndexer ix0(boundary_only);
    CHECK(ix0.num_vars() == 0);
    CHECK(spool_rows(ctx, ix0, boundary_only).empty());

    OffsetState state{{0.0, 0.4}};
    SeamIndexer ix(state);
    REQUIRE(ix.num_vars() == 1);
    CHECK(ix.var(0, 0) == -1);
    CHECK(ix.var(0, 1) == 0);

    auto rows = spool_rows(ctx, ix, state);
    REQUIRE(rows.size() == 2);
    CHECK(max_row_violation(rows, {0.2}) == doctest::Approx(0.0));
    CHECK(max_row_violation(rows, {0.25}) == doctest::Approx(0.0));
    CHECK(max_row_violation(rows, {0.1}) == doctest::Approx(0.0));
    CHECK(max_row_violation(rows, {0.05}) == doctest::Approx(0.05));  // gap below minimum
    CHECK(max_row_violation(rows, {0.3}) == doctest::Approx(0.05));   // gap above w_s - w_l
}

TEST_CASE("quality_rows keep seams away from classified vertices") {
    // Rectangle body with a convex tip hanging to y = 0.5 between two reflex
    // shoulders at y = 1.5.
    const Polygon comb{{0, 0},   {1, 0},   {1, 1.5}, {1.5, 0.5}, {2, 1.5},
                       {2, 0},   {3, 0},   {3, 2},   {0, 2}};
    ManufacturingConfig cfg = small_config();
    cfg.small_min = 0.15;
    cfg.flimsy_min = 0.2;

    Bundle bundle{{Ply("p", comb, 0.0, 0)}};
    BundleContext ctx(bundle, {}, cfg);

    const auto& bands = ctx.vertex_bands(0);
    REQUIRE(bands.size() == 3);
    int tips = 0, shoulders = 0;
    for (const VertexBand& b : bands) {
        if (b.kind == 0) {
            ++tips;
            CHECK(b.offset == doctest::Approx(0.5));
            CHECK(b.min_dist == doctest::Approx(0.15));
        } else {
            ++shoulders;
            CHECK(b.offset == doctest::Approx(1.5));
            CHECK(b.min_dist == doctest::Approx(0.2));
        }
    }
    CHECK(tips == 1);
    CHECK(shoulders == 2);

    OffsetState state{{0.0, 0.65}};
    SeamIndexer ix(state);
    auto branches = derive_branches(ctx, state);
    auto rows = quality_rows(ctx, ix, state, branches);
    REQUIRE(rows.size() == 3);
    // Above the tip: x >= 0.5 + 0.15; below the shoulders: x <= 1.5 - 0.2.
    CHECK(max_row_violation(rows, {0.65}) == doctest::Approx(0.0));
    CHECK(max_row_violation(rows, {0.70}) == doctest::Approx(0.0));
    CHECK(max_row_violation(rows, {0.60}) == doctest::Approx(0.05));
    CHECK(max_row_violation(rows, {1.35}) == doctest::Approx(0.05));

    // No classified vertices, no rows.
    Bundle plain{{Ply("r", box(0, 0, 1, 1), 0.0, 0)}};
    BundleContext pctx(plain, {}, cfg);
    OffsetState pstate{{0.0, 0.4}};
    SeamIndexer pix(pstate);
    CHECK(quality_rows(pctx, pix, pstate, derive_branches(pctx, pstate)).empty());
}

TEST_CASE("parallel_rows separate seams of aligned plies") {
    Bundle bundle{{Ply("a", box(0, 0, 1, 1), kPi / 2, 0), Ply("b", box(0, 0, 1, 1), kPi / 2, 1)}};
    BundleContext ctx(bundle, {}, small_config());
    CHECK(ctx.parallel(0, 1));
    CHECK(ctx.num_groups() == 1);
    CHECK(ctx.parallel_shift(0, 1) == doctest::Approx(0.0));
    CHECK(ctx.parallel_align(0, 1) == doctest::Approx(1.0));

    OffsetState state{{0.0, 0.4}, {0.0, 0.45}};
    SeamIndexer ix(state);
    REQUIRE(ix.num_vars() == 2);
    auto branches = derive_branches(ctx, state);
    CHECK(branches.parallel.size() == 3);  // one cross pair + two same-ply pairs
    auto rows = parallel_rows(ctx, ix, state, branches);
    REQUIRE(rows.size() == 3);
    CHECK(max_row_violation(rows, {0.4, 0.45}) == doctest::Approx(0.0));
    CHECK(max_row_violation(rows, {0.4, 0.42}) == doctest::Approx(0.03));

    // Mirror-ordered state flips the branch, not the separation.
    OffsetState flipped{{0.0, 0.45}, {0.0, 0.4}};
    auto frows = parallel_rows(ctx, ix, flipped, derive_branches(ctx, flipped));
    CHECK(max_row_violation(frows, {0.45, 0.4}) == doctest::Approx(0.0));
    CHECK(max_row_violation(frows, {0.45, 0.44}) == doctest::Approx(0.04));

    // The chain form is satisfied exactly when the pairwise form is.
    auto chain = parallel_chain_rows(ctx, ix, state);
    CHECK(max_row_violation(chain, {0.4, 0.45}) == doctest::Approx(0.0));
    CHECK(max_row_violation(chain, {0.4, 0.42}) == doctest::Approx(0.03));
}

TEST_CASE("enumerate_subspaces orders candidate intervals farthest first") {
    ManufacturingConfig cfg = small_config();
    const Ply ply("p", box(0, 0, 1, 1), 0.0, 0);

    {
        BundleContext ctx(Bundle{{ply}}, {}, cfg);
        auto subs = enumerate_subspaces(ctx, {{0.0}}, 0);
        REQUIRE(subs.size() == 1);
        CHECK(subs[0].interval.lo == doctest::Approx(0.1));
        CHECK(subs[0].interval.hi == doctest::Approx(0.25));
        CHECK(subs[0].probe == doctest::Approx(0.25));
    }
    {
        // Stay-out band (0.135, 0.215) inside the window splits it; the upper
        // remainder comes first.
        BundleContext ctx(Bundle{{ply}}, {{box(0.2, 0.16, 0.8, 0.19)}}, cfg);
        auto subs = enumerate_subspaces(ctx, {{0.0}}, 0);
        REQUIRE(subs.size() == 2);
        CHECK(subs[0].interval.lo == doctest::Approx(0.215));
        CHECK(subs[0].interval.hi == doctest::Approx(0.25));
        CHECK(subs[0].probe == doctest::Approx(0.25));
        CHECK(subs[1].interval.lo == doctest::Approx(0.1));
        CHECK(subs[1].interval.hi == doctest::Approx(0.135));
        CHECK(subs[1].probe == doctest::Approx(0.135));
    }
    {
        // Band swallowing the whole window leaves nothing.
        BundleContext ctx(Bundle{{ply}}, {{box(0.2, 0.07, 0.8, 0.29)}}, cfg);
        CHECK(enumerate_subspaces(ctx, {{0.0}}, 0).empty());
    }
    {
        // The window clamps at the ply width.
        BundleContext ctx(Bundle{{ply}}, {}, cfg);
        auto subs = enumerate_subspaces(ctx, {{0.0, 0.8}}, 0);
        REQUIRE(subs.size() == 1);
        CHECK(subs[0].interval.lo == doctest::Approx(0.9));
        CHECK(subs[0].interval.hi == doctest::Approx(1.0));
    }
}

TEST_CASE("triple_rows certify zero three-band overlap") {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Polygon domain = box(-3, -3, 3, 3);
    const ManufacturingConfig cfg = small_config();
    const double min_sep = 5.0 * kPi / 180.0;

    auto folded_dist = [](double a, double b) {
        double d = std::abs(a - b);
        d = std::fmod(d, kPi);
        return std::min(d, kPi - d);
    };

    int active = 0, positive = 0, zero = 0;
    int sound_failures = 0;
    int deep = 0, converse_mismatch = 0;
    for (int t = 0; t < 1000; ++t) {
        double th[3];
        do {
            for (double& a : th) a = unit(rng) * kPi;
        } while (folded_dist(th[0], th[1]) < min_sep || folded_dist(th[0], th[2]) < min_sep ||
                 folded_dist(th[1], th[2]) < min_sep);

        Bundle bundle;
        OffsetState state;
        std::vector<double> x;
        for (int i = 0; i < 3; ++i) {
            bundle.plies.emplace_back("p" + std::to_string(i), domain, th[i], i);
            const double w = bundle.plies.back().width();
            const double off = 1.5 + unit(rng) * (w - 3.0);
            state.push_back({0.0, off});
            x.push_back(off);
        }
        BundleContext ctx(bundle, {}, cfg);
        SeamIndexer ix(state);
        auto branches = derive_branches(ctx, state);
        auto rows = triple_rows(ctx, ix, state, branches);
        if (rows.empty()) continue;  // crossings outside the plies: no active triple
        ++active;

        const double viol = max_row_violation(rows, x);
        LineStd lines[3];
        for (int i = 0; i < 3; ++i) {
            lines[i] = seam_to_line(ctx.ply(i), {state[static_cast<size_t>(i)][1]});
        }
        const Strip s0{lines[0], cfg.overlap_width / 2.0};
        const Strip s1{lines[1], cfg.overlap_width / 2.0};
        const Strip s2{lines[2], cfg.overlap_width / 2.0};
        const double area = triple_overlap_area(s0, s1, s2, domain);

        if (area > 1e-12) ++positive;
        else ++zero;

        // Soundness: satisfied rows guarantee no triple-stacked overlap.
        if (viol <= 1e-9 && area > 1e-10) ++sound_failures;

        // Tightness, checked only when all crossings are so deep inside the
        // domain that clipping cannot hide a violation.
        bool inside = true;
        for (int i = 0; i < 3 && inside; ++i) {
            auto pt = line_intersection(lines[i], lines[(i + 1) % 3]);
            inside = pt && std::abs(pt->x) <= 1.8 && std::abs(pt->y) <= 1.8;
        }
        if (inside) {
            ++deep;
            if (area <= 1e-12 && viol > 1e-6) ++converse_mismatch;
        }
    }

    CHECK(sound_failures == 0);
    CHECK(active > 300);
    CHECK(positive > 20);
    CHECK(zero > 100);
    CHECK(deep > 100);
    CHECK(converse_mismatch <= deep / 20);
}
