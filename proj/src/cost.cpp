#include "plypart/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "plypart/search.hpp"

namespace plypart {

namespace {

const std::vector<double>& offsets_for(const Design& design, const Ply& ply) {
    static const std::vector<double> kBoundaryOnly{0.0};
    const auto it = design.seams.find(ply.id());
    if (it == design.seams.end() || it->second.empty()) return kBoundaryOnly;
    return it->second;
}

// Mean fiber-direction extent over the bundle, the default sub-ply length
// scale for the trim estimate.
double mean_fiber_extent(const Bundle& bundle) {
    if (bundle.plies.empty()) return 0.0;
    double sum = 0.0;
    for (const Ply& ply : bundle.plies) {
        sum += project_polygon(ply.polygon(), ply.fiber_dir()).length();
    }
    return sum / static_cast<double>(bundle.plies.size());
}

double resolve_mean_length(const Bundle& bundle, const CostParams& params) {
    return params.mean_subply_length ? *params.mean_subply_length : mean_fiber_extent(bundle);
}

// Total in-polygon length of the seam line.
double seam_clip_length(const Ply& ply, double offset) {
    const Point2 base = ply.origin() + ply.transverse_dir() * offset;
    double len = 0.0;
    for (const Interval& span : line_polygon_spans(base, ply.fiber_dir(), ply.polygon())) {
        len += span.length();
    }
    return len;
}

// x-extent of the polygon on the horizontal scanline at height y.
std::optional<Interval> x_extent_at(const Polygon& poly, double y) {
    const auto spans = line_polygon_spans({0.0, y}, {1.0, 0.0}, poly);
    if (spans.empty()) return std::nullopt;
    Interval out{spans.front().lo, spans.front().hi};
    for (const Interval& s : spans) {
        out.lo = std::min(out.lo, s.lo);
        out.hi = std::max(out.hi, s.hi);
    }
    return out;
}

Polygon shift_to_origin(Polygon poly) {
    double minx = std::numeric_limits<double>::infinity();
    double miny = std::numeric_limits<double>::infinity();
    for (const Point2& p : poly) {
        minx = std::min(minx, p.x);
        miny = std::min(miny, p.y);
    }
    for (Point2& p : poly) {
        p.x -= minx;
        p.y -= miny;
    }
    return poly;
}

Polygon ccw(Polygon poly) {
    if (polygon_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
    return poly;
}

// The four cutting configurations: sign flips in the local frame, re-anchored
// at the origin.
Polygon configured_polygon(const Polygon& local, bool rotated, bool mirrored) {
    const double su = rotated ? -1.0 : 1.0;
    const double sv = (rotated != mirrored) ? -1.0 : 1.0;
    Polygon out = local;
    for (Point2& p : out) {
        p.x *= su;
        p.y *= sv;
    }
    return ccw(shift_to_origin(std::move(out)));
}

std::vector<double> profile_heights(const Polygon& poly) {
    std::vector<double> ys;
    for (const Point2& p : poly) {
        ys.push_back(p.y);
        ys.push_back(p.y - 1e-9);
        ys.push_back(p.y + 1e-9);
    }
    return ys;
}

}  // namespace

std::vector<SubPlyPiece> extract_subplies(const Design& design, const Bundle& bundle,
                                          const ManufacturingConfig& config) {
    std::vector<SubPlyPiece> pieces;
    const double half = config.overlap_width / 2.0;
    for (const Ply& ply : bundle.plies) {
        const std::vector<double>& offsets = offsets_for(design, ply);
        const size_t n = offsets.size();
        int counter = 0;
        for (size_t k = 0; k < n; ++k) {
            const double lo = (k == 0) ? 0.0 : offsets[k] - half;
            const double hi = (k + 1 < n) ? offsets[k + 1] + half : ply.width();
            const Point2 d = ply.transverse_dir();
            const double base_c = -dot(ply.origin(), d);
            // Keep lo <= (d . p - proj0) <= hi.
            std::vector<Polygon> slab;
            for (const Polygon& above :
                 clip_halfplane(ply.polygon(), {d.x, d.y, base_c - lo}, true)) {
                for (Polygon& piece : clip_halfplane(above, {d.x, d.y, base_c - hi}, false)) {
                    slab.push_back(std::move(piece));
                }
            }
            for (const Polygon& outline : slab) {
                SubPlyPiece piece;
                piece.ply_id = ply.id();
                piece.index = counter++;
                piece.width = hi - lo;
                // Local spool frame: x along the fiber, y transverse.
                Polygon local;
                local.reserve(outline.size());
                for (const Point2& p : outline) {
                    local.push_back({dot(p, ply.fiber_dir()), dot(p, d)});
                }
                local = ccw(shift_to_origin(std::move(local)));
                piece.length = project_polygon(local, {1.0, 0.0}).length();
                piece.polygon = std::move(local);
                pieces.push_back(std::move(piece));
            }
        }
    }
    return pieces;
}

double trim_loss_estimate(const Design& design, const Bundle& bundle,
                          const ManufacturingConfig& config, const CostParams& params) {
    const double mean_len = resolve_mean_length(bundle, params);
    double total = 0.0;
    for (const Ply& ply : bundle.plies) {
        const std::vector<double>& offsets = offsets_for(design, ply);
        for (size_t i = 0; i + 1 < offsets.size(); ++i) {
            total += (config.spool_width - (offsets[i + 1] - offsets[i])) * mean_len;
        }
    }
    return total;
}

CostBreakdown estimate_cost(const Design& design, const Bundle& bundle,
                            const ManufacturingConfig& config, const CostParams& params) {
    CostBreakdown out;
    for (const Ply& ply : bundle.plies) {
        out.a_d += polygon_area(ply.polygon());
        const std::vector<double>& offsets = offsets_for(design, ply);
        for (size_t i = 1; i < offsets.size(); ++i) {
            out.a_l += config.overlap_width * seam_clip_length(ply, offsets[i]);
            ++out.n_seam;
        }
    }
    out.a_trim = trim_loss_estimate(design, bundle, config, params);
    out.material_cost =
        (out.a_d + out.a_l + out.a_trim) * (params.a_mat * config.spool_width + params.b_mat);
    out.seam_cost = static_cast<double>(out.n_seam) * params.seam_cost;
    out.total = out.material_cost + out.seam_cost;
    return out;
}

NestLayout nest(const std::vector<SubPlyPiece>& pieces, double spool_width) {
    NestLayout layout;
    layout.spool_width = spool_width;
    if (pieces.empty()) return layout;
    for (const SubPlyPiece& piece : pieces) {
        if (piece.width > spool_width + 1e-9) {
            throw std::invalid_argument("nest: piece '" + piece.ply_id + "#" +
                                        std::to_string(piece.index) + "' wider than the spool");
        }
    }

    std::vector<size_t> remaining(pieces.size());
    for (size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;

    // Deterministic opener: the widest piece (then longest, then id order).
    std::sort(remaining.begin(), remaining.end(), [&](size_t a, size_t b) {
        const SubPlyPiece& pa = pieces[a];
        const SubPlyPiece& pb = pieces[b];
        if (pa.width != pb.width) return pa.width > pb.width;
        if (pa.length != pb.length) return pa.length > pb.length;
        if (pa.ply_id != pb.ply_id) return pa.ply_id < pb.ply_id;
        return pa.index < pb.index;
    });

    std::vector<Polygon> placed;          // outlines in band coordinates
    std::vector<double> placed_heights;   // cached y breakpoints
    Polygon prev_outline;                 // previous placement, for the gap metric

    auto min_shift = [&](const Polygon& cand) {
        // Smallest x-translation keeping the candidate clear of everything
        // placed: max over shared scanlines of (placed right - candidate
        // left).  Profiles are piecewise linear, so vertex heights (nudged
        // both ways) carry the extrema.
        double dx = 0.0;
        std::vector<double> ys = profile_heights(cand);
        ys.insert(ys.end(), placed_heights.begin(), placed_heights.end());
        std::sort(ys.begin(), ys.end());
        for (double y : ys) {
            if (y < -1e-12 || y > spool_width + 1e-12) continue;
            const auto cl = x_extent_at(cand, y);
            if (!cl) continue;
            for (const Polygon& other : placed) {
                const auto pr = x_extent_at(other, y);
                if (pr) dx = std::max(dx, pr->hi - cl->lo);
            }
        }
        return dx;
    };

    auto gap_area = [&](const Polygon& cand_at_dx) {
        // Area between the previous piece's right frontier and the
        // candidate's left frontier over the heights both cover.
        if (prev_outline.empty()) return 0.0;
        std::vector<double> ys = profile_heights(cand_at_dx);
        const std::vector<double> prev_ys = profile_heights(prev_outline);
        ys.insert(ys.end(), prev_ys.begin(), prev_ys.end());
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
        double area = 0.0;
        for (size_t i = 0; i + 1 < ys.size(); ++i) {
            const double ya = ys[i], yb = ys[i + 1];
            if (yb <= ya) continue;
            auto g = [&](double y) -> std::optional<double> {
                const auto cl = x_extent_at(cand_at_dx, y);
                const auto pr = x_extent_at(prev_outline, y);
                if (!cl || !pr) return std::nullopt;
                return std::max(0.0, cl->lo - pr->hi);
            };
            const auto ga = g(ya);
            const auto gb = g(yb);
            if (ga && gb) area += 0.5 * (*ga + *gb) * (yb - ya);
        }
        return area;
    };

    bool first = true;
    while (!remaining.empty()) {
        size_t best_slot = 0;
        int best_cfg = 0;
        double best_gap = std::numeric_limits<double>::infinity();
        double best_dx = 0.0;
        Polygon best_poly;

        const size_t slots = first ? 1 : remaining.size();
        for (size_t slot = 0; slot < slots; ++slot) {
            const SubPlyPiece& piece = pieces[remaining[slot]];
            for (int cfg = 0; cfg < (first ? 1 : 4); ++cfg) {
                Polygon local = configured_polygon(piece.polygon, cfg & 1, (cfg >> 1) & 1);
                const double dx = min_shift(local);
                Polygon at_dx = local;
                for (Point2& p : at_dx) p.x += dx;
                const double gap = first ? 0.0 : gap_area(at_dx);
                if (gap < best_gap - 1e-12) {
                    best_gap = gap;
                    best_slot = slot;
                    best_cfg = cfg;
                    best_dx = dx;
                    best_poly = std::move(at_dx);
                }
            }
        }

        const SubPlyPiece& chosen = pieces[remaining[best_slot]];
        NestPlacement placement;
        placement.piece = chosen.ply_id + "#" + std::to_string(chosen.index);
        placement.position = best_dx;
        placement.rotated = (best_cfg & 1) != 0;
        placement.mirrored = ((best_cfg >> 1) & 1) != 0;
        layout.placements.push_back(placement);
        for (const Point2& p : best_poly) {
            layout.used_length = std::max(layout.used_length, p.x);
            placed_heights.push_back(p.y);
            placed_heights.push_back(p.y - 1e-9);
            placed_heights.push_back(p.y + 1e-9);
        }
        prev_outline = best_poly;
        layout.placed_polygons.push_back(std::move(best_poly));
        placed.push_back(layout.placed_polygons.back());
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_slot));
        first = false;
    }

    double piece_area = 0.0;
    for (const Polygon& poly : layout.placed_polygons) piece_area += polygon_area(poly);
    layout.trim_area = spool_width * layout.used_length - piece_area;
    return layout;
}

std::vector<SweepPoint> spool_sweep(const Bundle& bundle, const std::vector<StayOutZone>& zones,
                                    const ManufacturingConfig& config, const CostParams& params,
                                    int steps) {
    if (steps < 2) throw std::invalid_argument("spool_sweep: steps must be >= 2");
    if (!(params.spool_min > 0.0) || !(params.spool_max > params.spool_min)) {
        throw std::invalid_argument("spool_sweep: need 0 < spool_min < spool_max");
    }
    std::vector<SweepPoint> out;
    for (int k = 0; k < steps; ++k) {
        SweepPoint point;
        point.spool_width = params.spool_min + (params.spool_max - params.spool_min) *
                                                   static_cast<double>(k) /
                                                   static_cast<double>(steps - 1);
        ManufacturingConfig cfg = config;
        cfg.spool_width = point.spool_width;
        try {
            cfg.validate();
            PartitionOutcome res = greedy_partition(bundle, zones, cfg);
            point.design = res.design;
            point.feasible = res.complete;
            if (res.complete) point.cost = estimate_cost(res.design, bundle, cfg, params);
        } catch (const std::exception&) {
            point.feasible = false;
        }
        out.push_back(std::move(point));
    }
    bool any = false;
    for (const SweepPoint& p : out) any = any || p.feasible;
    if (!any) throw std::runtime_error("spool_sweep: no feasible width in the range");
    return out;
}

}  // namespace plypart
