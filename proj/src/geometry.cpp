#include "plypart/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace plypart {

namespace {

constexpr double kOnLineEps = 1e-12;   // vertex counts as lying on a line
constexpr double kAreaDropEps = 1e-14; // clip pieces below this area are noise
constexpr double kParallelEps = 1e-10; // determinant threshold for parallel lines

// Sutherland-Hodgman clip against a single half-plane.  Correct for any
// simple subject polygon as far as area is concerned; disconnected results
// come back joined by zero-width bridges, so callers needing real components
// use clip_halfplane instead.
Polygon sh_clip(const Polygon& poly, const LineStd& line, bool keep_positive) {
    Polygon out;
    const size_t n = poly.size();
    if (n == 0) return out;
    const double sgn = keep_positive ? 1.0 : -1.0;
    for (size_t i = 0; i < n; ++i) {
        const Point2& cur = poly[i];
        const Point2& nxt = poly[(i + 1) % n];
        const double dc = sgn * signed_distance(line, cur);
        const double dn = sgn * signed_distance(line, nxt);
        if (dc >= -kOnLineEps) {
            out.push_back(cur);
            if (dn < -kOnLineEps && dc > kOnLineEps) {
                const double t = dc / (dc - dn);
                out.push_back(cur + (nxt - cur) * t);
            }
        } else if (dn > kOnLineEps) {
            const double t = dc / (dc - dn);
            out.push_back(cur + (nxt - cur) * t);
        }
    }
    if (out.size() < 3 || std::abs(polygon_area(out)) < kAreaDropEps) out.clear();
    return out;
}

bool is_convex(const Polygon& poly) {
    const size_t n = poly.size();
    double ref = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Point2 e1 = poly[(i + 1) % n] - poly[i];
        const Point2 e2 = poly[(i + 2) % n] - poly[(i + 1) % n];
        const double c = cross(e1, e2);
        if (std::abs(c) < 1e-12) continue;
        if (ref == 0.0) {
            ref = c;
        } else if (c * ref < 0.0) {
            return false;
        }
    }
    return true;
}

Polygon ensure_ccw(Polygon poly) {
    if (polygon_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
    return poly;
}

}  // namespace

Interval project_polygon(const Polygon& poly, const Point2& axis) {
    Interval iv;
    if (poly.empty()) return iv;
    double lo = dot(poly[0], axis);
    double hi = lo;
    for (size_t i = 1; i < poly.size(); ++i) {
        const double p = dot(poly[i], axis);
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    iv.lo = lo;
    iv.hi = hi;
    return iv;
}

std::optional<Point2> line_intersection(const LineStd& l1, const LineStd& l2) {
    const double det = l1.a * l2.b - l2.a * l1.b;
    if (std::abs(det) <= kParallelEps) return std::nullopt;
    const double x = (l1.b * l2.c - l2.b * l1.c) / det;
    const double y = (l2.a * l1.c - l1.a * l2.c) / det;
    return Point2{x, y};
}

std::vector<Polygon> clip_halfplane(const Polygon& poly, const LineStd& line, bool keep_positive) {
    std::vector<Polygon> result;
    const size_t n = poly.size();
    if (n < 3) return result;

    const double sgn = keep_positive ? 1.0 : -1.0;
    std::vector<int> cls(n);  // +1 keep side, 0 on line, -1 discard side
    bool any_in = false, any_out = false;
    for (size_t i = 0; i < n; ++i) {
        const double d = sgn * signed_distance(line, poly[i]);
        cls[i] = (d > kOnLineEps) ? 1 : (d < -kOnLineEps ? -1 : 0);
        if (cls[i] > 0) any_in = true;
        if (cls[i] < 0) any_out = true;
    }
    if (!any_out) {
        if (any_in) result.push_back(poly);
        return result;  // fully kept, or flattened onto the line (zero area)
    }
    if (!any_in) return result;  // fully discarded

    // Collect the kept boundary chains.  Each chain runs from an entry point
    // to an exit point, both on the clip line.
    struct Chain {
        Point2 entry;
        Point2 exit;
        std::vector<Point2> mids;  // kept vertices strictly between the crossings
    };
    std::vector<Chain> chains;

    // Find an edge that enters the kept side so the walk starts cleanly.
    size_t start = n;
    for (size_t i = 0; i < n; ++i) {
        if (cls[i] < 0 && cls[(i + 1) % n] >= 0) {
            start = i;
            break;
        }
    }
    if (start == n) return result;  // cannot happen with any_in && any_out

    auto edge_cross = [&](size_t i, size_t j) {
        const double di = sgn * signed_distance(line, poly[i]);
        const double dj = sgn * signed_distance(line, poly[j]);
        const double t = di / (di - dj);
        return poly[i] + (poly[j] - poly[i]) * t;
    };

    size_t i = start;
    for (size_t step = 0; step < n;) {
        // Advance to the entry of the next chain.
        while (cls[(i + 1) % n] < 0) {
            i = (i + 1) % n;
            ++step;
            if (step >= n) break;
        }
        if (step >= n) break;
        Chain ch;
        size_t j = (i + 1) % n;
        ch.entry = (cls[j] == 0) ? poly[j] : edge_cross(i, j);
        // Walk the kept run.
        while (cls[j] >= 0) {
            ch.mids.push_back(poly[j]);
            i = j;
            j = (j + 1) % n;
            ++step;
            if (step > n) break;
        }
        ch.exit = (cls[i] == 0) ? poly[i] : edge_cross(i, j);
        // Drop crossing points duplicated by on-line vertices at the run ends.
        if (!ch.mids.empty() && norm(ch.mids.front() - ch.entry) < 1e-12) ch.mids.erase(ch.mids.begin());
        if (!ch.mids.empty() && norm(ch.mids.back() - ch.exit) < 1e-12) ch.mids.pop_back();
        chains.push_back(std::move(ch));
    }
    if (chains.empty()) return result;

    // Pair crossing points along the clip line: sorted by position, the
    // segments between the 1st/2nd, 3rd/4th, ... crossings lie inside the
    // polygon and bridge the chains into closed components.
    const Point2 dir{-line.b, line.a};
    struct Event {
        double t;
        int chain;
        bool is_entry;
    };
    std::vector<Event> events;
    for (size_t k = 0; k < chains.size(); ++k) {
        events.push_back({dot(chains[k].entry, dir), static_cast<int>(k), true});
        events.push_back({dot(chains[k].exit, dir), static_cast<int>(k), false});
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.is_entry < b.is_entry;  // exits first on exact ties
    });
    if (events.size() % 2 != 0) {
        // Tangency confused the pairing; fall back to the unsplit clip, which
        // still has the right area.
        Polygon sh = sh_clip(poly, line, keep_positive);
        if (!sh.empty()) result.push_back(std::move(sh));
        return result;
    }

    // bridge[chain][is_entry] -> (chain, is_entry) reached along the line.
    std::vector<std::array<std::pair<int, bool>, 2>> bridge(chains.size());
    for (size_t k = 0; k + 1 < events.size(); k += 2) {
        const Event& a = events[k];
        const Event& b = events[k + 1];
        bridge[a.chain][a.is_entry ? 1 : 0] = {b.chain, b.is_entry};
        bridge[b.chain][b.is_entry ? 1 : 0] = {a.chain, a.is_entry};
    }

    std::vector<bool> used(chains.size(), false);
    for (size_t k = 0; k < chains.size(); ++k) {
        if (used[k]) continue;
        Polygon comp;
        int c = static_cast<int>(k);
        bool at_entry = true;  // traverse chain starting from its entry point
        while (!used[c]) {
            used[c] = true;
            const Chain& ch = chains[c];
            if (at_entry) {
                comp.push_back(ch.entry);
                comp.insert(comp.end(), ch.mids.begin(), ch.mids.end());
                comp.push_back(ch.exit);
                auto [nc, ne] = bridge[c][0];  // leave via the exit point
                c = nc;
                at_entry = ne;
            } else {
                comp.push_back(ch.exit);
                comp.insert(comp.end(), ch.mids.rbegin(), ch.mids.rend());
                comp.push_back(ch.entry);
                auto [nc, ne] = bridge[c][1];  // leave via the entry point
                c = nc;
                at_entry = ne;
            }
        }
        // Remove consecutive duplicates introduced by zero-length bridges.
        Polygon clean;
        for (const Point2& p : comp) {
            if (clean.empty() || norm(p - clean.back()) > 1e-12) clean.push_back(p);
        }
        while (clean.size() > 1 && norm(clean.front() - clean.back()) < 1e-12) clean.pop_back();
        if (clean.size() >= 3 && std::abs(polygon_area(clean)) >= kAreaDropEps) {
            result.push_back(ensure_ccw(std::move(clean)));
        }
    }
    return result;
}

std::vector<Polygon> clip_polygon(const Polygon& subject, const Polygon& clip) {
    std::vector<Polygon> pieces;
    if (subject.size() < 3 || clip.size() < 3) return pieces;

    const Polygon clip_ccw = ensure_ccw(clip);
    auto clip_convex_region = [](std::vector<Polygon> in, const Polygon& region) {
        const size_t m = region.size();
        for (size_t e = 0; e < m && !in.empty(); ++e) {
            const Point2& p = region[e];
            const Point2& q = region[(e + 1) % m];
            Point2 edge = q - p;
            const double len = norm(edge);
            if (len < 1e-15) continue;
            // Interior of a CCW polygon lies left of each edge.
            LineStd line;
            line.a = -edge.y / len;
            line.b = edge.x / len;
            line.c = -(line.a * p.x + line.b * p.y);
            std::vector<Polygon> next;
            for (const Polygon& piece : in) {
                auto parts = clip_halfplane(piece, line, true);
                next.insert(next.end(), parts.begin(), parts.end());
            }
            in = std::move(next);
        }
        return in;
    };

    if (is_convex(clip_ccw)) {
        return clip_convex_region({subject}, clip_ccw);
    }
    for (const Polygon& tri : triangulate(clip_ccw)) {
        auto parts = clip_convex_region({subject}, tri);
        pieces.insert(pieces.end(), parts.begin(), parts.end());
    }
    return pieces;
}

double total_area(const std::vector<Polygon>& pieces) {
    double a = 0.0;
    for (const Polygon& p : pieces) a += std::abs(polygon_area(p));
    return a;
}

std::vector<Polygon> triangulate(const Polygon& poly) {
    std::vector<Polygon> tris;
    Polygon work = ensure_ccw(poly);
    // Strip exact duplicate neighbors defensively.
    Polygon dedup;
    for (const Point2& p : work) {
        if (dedup.empty() || norm(p - dedup.back()) > 1e-14) dedup.push_back(p);
    }
    while (dedup.size() > 1 && norm(dedup.front() - dedup.back()) < 1e-14) dedup.pop_back();
    work = std::move(dedup);
    if (work.size() < 3) return tris;

    // Inclusive containment: a vertex on the candidate ear's boundary (e.g. a
    // reflex corner exactly on the new diagonal) must also block the ear, or
    // clipping it would leave a self-touching remainder.
    auto point_in_tri = [](const Point2& p, const Point2& a, const Point2& b, const Point2& c) {
        const double d1 = cross(b - a, p - a);
        const double d2 = cross(c - b, p - b);
        const double d3 = cross(a - c, p - c);
        return d1 >= -1e-14 && d2 >= -1e-14 && d3 >= -1e-14;
    };

    std::vector<int> idx(work.size());
    for (size_t i = 0; i < work.size(); ++i) idx[i] = static_cast<int>(i);

    size_t guard = 0;
    const size_t guard_max = work.size() * work.size() + 16;
    while (idx.size() > 3) {
        if (++guard > guard_max) {
            throw std::runtime_error("triangulate: no ear found (degenerate polygon?)");
        }
        bool clipped = false;
        for (size_t k = 0; k < idx.size(); ++k) {
            const Point2& a = work[idx[(k + idx.size() - 1) % idx.size()]];
            const Point2& b = work[idx[k]];
            const Point2& c = work[idx[(k + 1) % idx.size()]];
            const double turn = cross(b - a, c - b);
            if (turn < -1e-14) continue;  // reflex corner, not an ear
            if (turn <= 1e-14) {
                // Collinear corner contributes nothing; drop it outright.
                idx.erase(idx.begin() + static_cast<long>(k));
                clipped = true;
                break;
            }
            bool blocked = false;
            for (size_t m = 0; m < idx.size(); ++m) {
                if (m == k || m == (k + idx.size() - 1) % idx.size() || m == (k + 1) % idx.size()) continue;
                if (point_in_tri(work[idx[m]], a, b, c)) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) continue;
            tris.push_back({a, b, c});
            idx.erase(idx.begin() + static_cast<long>(k));
            clipped = true;
            break;
        }
        if (!clipped) {
            throw std::runtime_error("triangulate: stuck (self-intersecting input?)");
        }
    }
    if (idx.size() == 3) {
        Polygon tri{work[idx[0]], work[idx[1]], work[idx[2]]};
        if (std::abs(polygon_area(tri)) > kAreaDropEps) tris.push_back(std::move(tri));
    }
    return tris;
}

double triple_overlap_area(const Strip& s1, const Strip& s2, const Strip& s3,
                           const Polygon& domain) {
    if (domain.size() < 3) return 0.0;
    const Strip strips[3] = {s1, s2, s3};
    double area = 0.0;
    for (const Polygon& tri : triangulate(domain)) {
        Polygon piece = tri;
        for (const Strip& s : strips) {
            if (piece.empty()) break;
            // Band = intersection of two half-planes around the center line.
            LineStd lo = s.center;
            lo.c += s.half_width;  // signed_distance >= -half_width
            piece = sh_clip(piece, lo, true);
            if (piece.empty()) break;
            LineStd hi = s.center;
            hi.c -= s.half_width;  // signed_distance <= +half_width
            piece = sh_clip(piece, hi, false);
        }
        if (!piece.empty()) area += std::abs(polygon_area(piece));
    }
    return area;
}

bool seam_polygon_intersects(const Ply& ply, const Seam& seam) {
    return seam.offset > 0.0 && seam.offset < ply.width();
}

VertexClasses classify_vertices(const Ply& ply) {
    VertexClasses out;
    const Polygon& poly = ply.polygon();  // CCW by construction
    const Point2 dperp = ply.transverse_dir();
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Point2& prev = poly[(i + n - 1) % n];
        const Point2& cur = poly[i];
        const Point2& next = poly[(i + 1) % n];
        const double turn = cross(cur - prev, next - cur);
        const double p1 = dot(prev - cur, dperp);  // edges emanate from the vertex
        const double p2 = dot(next - cur, dperp);
        if (turn >= 0.0) {
            // Convex corner: both emanating edges must lean the same way
            // across the fiber, and neither may run along it.
            if (std::abs(p1) >= 1e-9 && std::abs(p2) >= 1e-9 && (p1 > 0) == (p2 > 0)) {
                out.small_piece.push_back(static_cast<int>(i));
            }
        } else {
            // Reflex corner: only a strict disagreement of the projections
            // (boundary crossing the seam direction transversally) avoids a
            // flimsy flap; a fiber-parallel edge still produces one.
            const bool disagree = (p1 > 1e-9 && p2 < -1e-9) || (p1 < -1e-9 && p2 > 1e-9);
            if (!disagree) out.flimsy.push_back(static_cast<int>(i));
        }
    }
    return out;
}

std::vector<Interval> line_polygon_spans(const Point2& base, const Point2& dir,
                                         const Polygon& poly) {
    std::vector<Interval> spans;
    const size_t n = poly.size();
    if (n < 3) return spans;
    const Point2 normal{-dir.y, dir.x};
    std::vector<double> ts;
    for (size_t i = 0; i < n; ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % n];
        double dp = dot(p - base, normal);
        double dq = dot(q - base, normal);
        // Nudge on-line endpoints to one side so each crossing counts once.
        if (dp == 0.0) dp = kOnLineEps;
        if (dq == 0.0) dq = kOnLineEps;
        if ((dp > 0) == (dq > 0)) continue;
        const double t = dp / (dp - dq);
        const Point2 hit = p + (q - p) * t;
        ts.push_back(dot(hit - base, dir));
    }
    std::sort(ts.begin(), ts.end());
    for (size_t i = 0; i + 1 < ts.size(); i += 2) {
        spans.push_back({ts[i], ts[i + 1]});
    }
    return spans;
}

BBox bounding_box(const Polygon& poly) {
    BBox b;
    if (poly.empty()) return b;
    b.min_x = b.max_x = poly[0].x;
    b.min_y = b.max_y = poly[0].y;
    for (const Point2& p : poly) {
        b.min_x = std::min(b.min_x, p.x);
        b.max_x = std::max(b.max_x, p.x);
        b.min_y = std::min(b.min_y, p.y);
        b.max_y = std::max(b.max_y, p.y);
    }
    return b;
}

bool point_in_polygon(const Point2& p, const Polygon& poly) {
    bool inside = false;
    const size_t n = poly.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2& a = poly[i];
        const Point2& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_hit = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < x_hit) inside = !inside;
        }
    }
    return inside;
}

std::vector<Interval> subtract_open_intervals(const Interval& window,
                                              std::vector<Interval> bands) {
    std::vector<Interval> free;
    if (window.empty()) return free;
    std::sort(bands.begin(), bands.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo;
    });
    double cursor = window.lo;
    for (const Interval& band : bands) {
        if (band.empty() || band.hi <= window.lo || band.lo >= window.hi) {
            // Touching the window's ends is fine: the bands are open.
            if (band.lo >= window.hi) break;
            continue;
        }
        if (band.lo >= cursor) {
            free.push_back({cursor, std::min(band.lo, window.hi)});
        }
        cursor = std::max(cursor, band.hi);
        if (cursor > window.hi) break;
    }
    if (cursor <= window.hi) free.push_back({cursor, window.hi});
    // Degenerate single points survive on purpose: a seam may sit exactly on
    // the boundary of an excluded band.
    std::vector<Interval> cleaned;
    for (const Interval& iv : free) {
        if (!iv.empty()) cleaned.push_back(iv);
    }
    return cleaned;
}

std::vector<Interval> merge_intervals(std::vector<Interval> intervals) {
    std::vector<Interval> merged;
    intervals.erase(std::remove_if(intervals.begin(), intervals.end(),
                                   [](const Interval& iv) { return iv.empty(); }),
                    intervals.end());
    std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo;
    });
    for (const Interval& iv : intervals) {
        if (!merged.empty() && iv.lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        } else {
            merged.push_back(iv);
        }
    }
    return merged;
}

}  // namespace plypart
