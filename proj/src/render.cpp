#include "plypart/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "plypart/geometry.hpp"

namespace plypart {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

std::string fmt(double v) {
    char buf[48];
    // Avoid signed negative zero so output is stable across code paths.
    if (v == 0.0) v = 0.0;
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct Mapper {
    double minx = 0.0, maxy = 0.0, scale = 1.0, pad = 0.0;
    double width = 0.0, height = 0.0;

    void init(const BBox& box) {
        const double w = std::max(box.max_x - box.min_x, 1e-9);
        const double h = std::max(box.max_y - box.min_y, 1e-9);
        pad = 0.05 * std::max(w, h);
        scale = 640.0 / std::max(w + 2 * pad, h + 2 * pad);
        minx = box.min_x;
        maxy = box.max_y;
        width = (w + 2 * pad) * scale;
        height = (h + 2 * pad) * scale;
    }
    double x(double wx) const { return (wx - minx + pad) * scale; }
    double y(double wy) const { return (maxy - wy + pad) * scale; }
};

std::string points_attr(const Polygon& poly, const Mapper& m) {
    std::string out;
    for (const Point2& p : poly) {
        if (!out.empty()) out += ' ';
        out += fmt(m.x(p.x)) + "," + fmt(m.y(p.y));
    }
    return out;
}

std::string svg_open(const Mapper& m) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(m.width) + "\" height=\"" +
           fmt(m.height) + "\" viewBox=\"0 0 " + fmt(m.width) + " " + fmt(m.height) + "\">\n";
}

// Plies in stack order (then id) so layering is stable.
std::vector<const Ply*> ordered_plies(const Project& project) {
    std::vector<const Ply*> plies;
    for (const Ply& ply : project.plies) plies.push_back(&ply);
    std::sort(plies.begin(), plies.end(), [](const Ply* a, const Ply* b) {
        if (a->stack_index() != b->stack_index()) return a->stack_index() < b->stack_index();
        return a->id() < b->id();
    });
    return plies;
}

BBox scene_bbox(const Project& project) {
    const double inf = std::numeric_limits<double>::infinity();
    BBox box{inf, inf, -inf, -inf};
    auto grow = [&box](const Polygon& poly) {
        for (const Point2& p : poly) {
            box.min_x = std::min(box.min_x, p.x);
            box.min_y = std::min(box.min_y, p.y);
            box.max_x = std::max(box.max_x, p.x);
            box.max_y = std::max(box.max_y, p.y);
        }
    };
    for (const Ply& ply : project.plies) grow(ply.polygon());
    for (const StayOutZone& zone : project.zones) grow(zone.polygon);
    if (!(box.min_x < box.max_x)) box = {0.0, 0.0, 1.0, 1.0};
    return box;
}

const std::vector<double>& design_offsets(const Result& result, const Ply& ply) {
    static const std::vector<double> kBoundaryOnly{0.0};
    const auto it = result.design.seams.find(ply.id());
    if (it == result.design.seams.end() || it->second.empty()) return kBoundaryOnly;
    return it->second;
}

// In-polygon parameter ranges of the seam line, falling back to the ply's
// full fiber extent when the scanline grazes an edge (the boundary seam).
std::vector<Interval> seam_spans(const Ply& ply, double offset) {
    const Point2 base = ply.origin() + ply.transverse_dir() * offset;
    std::vector<Interval> spans = line_polygon_spans(base, ply.fiber_dir(), ply.polygon());
    if (spans.empty()) {
        Interval ext = project_polygon(ply.polygon(), ply.fiber_dir());
        const double t0 = dot(base, ply.fiber_dir());
        spans.push_back({ext.lo - t0, ext.hi - t0});
    }
    return spans;
}

// Overlap strip of one interior seam clipped to its ply outline.
std::vector<Polygon> strip_pieces(const Ply& ply, double offset, double half) {
    const LineStd line = seam_to_line(ply, {offset});
    std::vector<Polygon> out;
    for (const Polygon& below : clip_halfplane(ply.polygon(), {line.a, line.b, line.c - half}, false)) {
        for (Polygon& piece : clip_halfplane(below, {line.a, line.b, line.c + half}, true)) {
            out.push_back(std::move(piece));
        }
    }
    return out;
}

}  // namespace

int max_overlap_depth(const Result& result) {
    const double half = result.project.config.overlap_width / 2.0;
    std::vector<Polygon> strips;
    for (const Ply& ply : result.project.plies) {
        const auto& offsets = design_offsets(result, ply);
        for (size_t i = 1; i < offsets.size(); ++i) {
            for (Polygon& piece : strip_pieces(ply, offsets[i], half)) {
                strips.push_back(std::move(piece));
            }
        }
    }
    if (strips.empty()) return 0;
    struct Region {
        Polygon poly;
        int depth;
    };
    std::vector<Region> regions;
    int max_depth = 1;
    constexpr size_t kRegionCap = 50000;
    for (const Polygon& strip : strips) {
        const size_t existing = regions.size();
        for (size_t r = 0; r < existing && regions.size() < kRegionCap; ++r) {
            for (Polygon& inter : clip_polygon(regions[r].poly, strip)) {
                if (std::abs(polygon_area(inter)) <= 1e-12) continue;
                regions.push_back({std::move(inter), regions[r].depth + 1});
                max_depth = std::max(max_depth, regions[r].depth + 1);
            }
        }
        regions.push_back({strip, 1});
    }
    return max_depth;
}

std::string render_seams_svg(const Result& result) {
    Mapper m;
    m.init(scene_bbox(result.project));
    std::string svg = svg_open(m);
    svg += "<rect width=\"" + fmt(m.width) + "\" height=\"" + fmt(m.height) +
           "\" fill=\"#ffffff\"/>\n";
    const double half = result.project.config.overlap_width / 2.0;
    size_t color = 0;
    for (const Ply* ply : ordered_plies(result.project)) {
        const char* c = kPalette[color++ % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg += "<polygon class=\"ply\" points=\"" + points_attr(ply->polygon(), m) +
               "\" fill=\"" + c + "\" fill-opacity=\"0.12\" stroke=\"" + c +
               "\" stroke-width=\"1.5\"/>\n";
        const auto& offsets = design_offsets(result, *ply);
        for (size_t i = 1; i < offsets.size(); ++i) {
            for (const Interval& span : seam_spans(*ply, offsets[i])) {
                const Point2 base = ply->origin() + ply->transverse_dir() * offsets[i];
                const Point2 a = base + ply->fiber_dir() * span.lo;
                const Point2 b = base + ply->fiber_dir() * span.hi;
                const Point2 off = ply->transverse_dir() * half;
                const Polygon band{a - off, b - off, b + off, a + off};
                svg += "<polygon class=\"overlap\" points=\"" + points_attr(band, m) +
                       "\" fill=\"#000000\" fill-opacity=\"0.25\"/>\n";
            }
        }
        for (size_t i = 0; i < offsets.size(); ++i) {
            for (const Interval& span : seam_spans(*ply, offsets[i])) {
                const Point2 base = ply->origin() + ply->transverse_dir() * offsets[i];
                const Point2 a = base + ply->fiber_dir() * span.lo;
                const Point2 b = base + ply->fiber_dir() * span.hi;
                svg += "<line class=\"seam\" x1=\"" + fmt(m.x(a.x)) + "\" y1=\"" + fmt(m.y(a.y)) +
                       "\" x2=\"" + fmt(m.x(b.x)) + "\" y2=\"" + fmt(m.y(b.y)) + "\" stroke=\"" +
                       c + "\" stroke-width=\"2\"/>\n";
            }
        }
    }
    for (const StayOutZone& zone : result.project.zones) {
        svg += "<polygon class=\"stayout\" points=\"" + points_attr(zone.polygon, m) +
               "\" fill=\"#222222\" fill-opacity=\"0.85\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string render_overlaps_svg(const Result& result) {
    Mapper m;
    m.init(scene_bbox(result.project));
    std::string svg = svg_open(m);
    svg += "<rect width=\"" + fmt(m.width) + "\" height=\"" + fmt(m.height) +
           "\" fill=\"#ffffff\"/>\n";
    const double half = result.project.config.overlap_width / 2.0;
    for (const Ply* ply : ordered_plies(result.project)) {
        svg += "<polygon class=\"ply\" points=\"" + points_attr(ply->polygon(), m) +
               "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
    }
    for (const Ply* ply : ordered_plies(result.project)) {
        const auto& offsets = design_offsets(result, *ply);
        for (size_t i = 1; i < offsets.size(); ++i) {
            for (const Polygon& piece : strip_pieces(*ply, offsets[i], half)) {
                svg += "<polygon class=\"strip\" points=\"" + points_attr(piece, m) +
                       "\" fill=\"#000000\" fill-opacity=\"0.18\"/>\n";
            }
        }
    }
    svg += "<text class=\"depth\" x=\"10\" y=\"20\" font-family=\"monospace\" font-size=\"14\" "
           "fill=\"#000000\">max overlap depth: " +
           std::to_string(max_overlap_depth(result)) + "</text>\n";
    svg += "</svg>\n";
    return svg;
}

std::string render_nest_svg(const Result& result) {
    if (!result.nest) throw std::runtime_error("render: result has no nest layout");
    const NestLayout& nest = *result.nest;
    Mapper m;
    BBox box{0.0, 0.0, std::max(nest.used_length, 1e-6), nest.spool_width};
    m.init(box);
    std::string svg = svg_open(m);
    svg += "<rect width=\"" + fmt(m.width) + "\" height=\"" + fmt(m.height) +
           "\" fill=\"#ffffff\"/>\n";
    // Band background = trim shading; pieces cover their own share.
    const Polygon band{{0.0, 0.0},
                       {nest.used_length, 0.0},
                       {nest.used_length, nest.spool_width},
                       {0.0, nest.spool_width}};
    svg += "<polygon class=\"trim\" points=\"" + points_attr(band, m) +
           "\" fill=\"#777777\" fill-opacity=\"0.6\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    for (size_t i = 0; i < nest.placed_polygons.size(); ++i) {
        const char* c = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg += "<polygon class=\"piece\" points=\"" + points_attr(nest.placed_polygons[i], m) +
               "\" fill=\"" + c + "\" fill-opacity=\"0.9\" stroke=\"#000000\" "
               "stroke-width=\"0.8\"/>\n";
    }
    svg += "<text class=\"trim-label\" x=\"10\" y=\"20\" font-family=\"monospace\" "
           "font-size=\"14\" fill=\"#000000\">trim area: " +
           fmt(nest.trim_area) + "</text>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace plypart
