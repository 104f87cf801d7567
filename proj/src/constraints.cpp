#include "plypart/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace plypart {

namespace {

constexpr double kParallelAngleEps = 1e-9;
constexpr double kPi = 3.14159265358979323846;

// Angle between two fiber orientations folded into [0, pi/2].
double fold_angle(double a, double b) {
    double d = std::abs(a - b);
    d = std::min(d, kPi - d);
    return d;
}

bool plies_parallel(const Ply& p, const Ply& q) {
    // sin of the angle between the fiber directions.
    const double s = std::abs(cross(p.fiber_dir(), q.fiber_dir()));
    return s <= kParallelAngleEps;
}

int encode_seam(int ply, int index) { return ply * BranchAssignment::kSeamEncode + index; }

}  // namespace

int bundle_size(int ply_count, int max_overlaps, int base_overlaps) {
    if (max_overlaps <= 0) throw std::invalid_argument("bundle_size: max_overlaps must be >= 1");
    if (base_overlaps <= 0) throw std::invalid_argument("bundle_size: base_overlaps must be >= 1");
    if (ply_count <= 0) return 0;
    const long long num = static_cast<long long>(ply_count) * base_overlaps;
    long long m = (num + max_overlaps - 1) / max_overlaps;
    m = std::max<long long>(1, std::min<long long>(m, ply_count));
    return static_cast<int>(m);
}

int resolve_max_overlaps(const ManufacturingConfig& config, int ply_count) {
    int n;
    if (config.max_overlaps) {
        n = *config.max_overlaps;
    } else if (config.tolerance) {
        n = static_cast<int>(std::floor(*config.tolerance * ply_count + 1e-9));
    } else {
        n = ply_count;
    }
    return std::max(1, std::min(n, ply_count));
}

std::vector<Bundle> make_bundles(const std::vector<Ply>& layup, int m,
                                 bool sort_by_orientation) {
    const int M = static_cast<int>(layup.size());
    if (M == 0) throw std::invalid_argument("make_bundles: empty layup");
    if (m < 1) throw std::invalid_argument("make_bundles: bundle size must be >= 1");
    std::vector<Bundle> bundles;

    std::vector<int> order(layup.size());
    std::iota(order.begin(), order.end(), 0);
    auto stack_less = [&](int a, int b) {
        const Ply& pa = layup[static_cast<size_t>(a)];
        const Ply& pb = layup[static_cast<size_t>(b)];
        if (pa.stack_index() != pb.stack_index()) return pa.stack_index() < pb.stack_index();
        return pa.id() < pb.id();
    };

    if (!sort_by_orientation) {
        std::sort(order.begin(), order.end(), stack_less);
    } else {
        // Cluster plies by orientation (union-find over the parallel relation,
        // which also merges angles wrapping across 0/pi).
        std::vector<int> parent(layup.size());
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int a) {
            while (parent[static_cast<size_t>(a)] != a) {
                parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
                a = parent[static_cast<size_t>(a)];
            }
            return a;
        };
        for (int i = 0; i < M; ++i) {
            for (int j = i + 1; j < M; ++j) {
                if (plies_parallel(layup[static_cast<size_t>(i)], layup[static_cast<size_t>(j)])) {
                    parent[static_cast<size_t>(find(j))] = find(i);
                }
            }
        }
        std::map<int, std::vector<int>> cluster_map;
        for (int i = 0; i < M; ++i) cluster_map[find(i)].push_back(i);
        struct Cluster {
            double angle;
            std::vector<int> members;
        };
        std::vector<Cluster> clusters;
        for (auto& [root, members] : cluster_map) {
            std::sort(members.begin(), members.end(), stack_less);
            clusters.push_back({layup[static_cast<size_t>(members.front())].fiber_angle(), members});
        }
        std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
            return a.angle < b.angle;
        });

        // Pick the cluster order whose bundle cuts mix orientations as little
        // as possible, and mix near-perpendicular ones when they must share.
        auto score_ordering = [&](const std::vector<int>& perm) {
            std::vector<double> angles;
            angles.reserve(layup.size());
            for (int ci : perm) {
                for (size_t k = 0; k < clusters[static_cast<size_t>(ci)].members.size(); ++k) {
                    angles.push_back(clusters[static_cast<size_t>(ci)].angle);
                }
            }
            int mixed = 0;
            double penalty = 0.0;
            for (int start = 0; start < M; start += m) {
                const int end = std::min(M, start + m);
                std::vector<double> uniq;
                for (int i = start; i < end; ++i) {
                    bool seen = false;
                    for (double u : uniq) seen = seen || std::abs(u - angles[static_cast<size_t>(i)]) < 1e-12;
                    if (!seen) uniq.push_back(angles[static_cast<size_t>(i)]);
                }
                if (uniq.size() > 1) ++mixed;
                for (size_t a = 0; a < uniq.size(); ++a) {
                    for (size_t b = a + 1; b < uniq.size(); ++b) {
                        penalty += std::abs(std::cos(fold_angle(uniq[a], uniq[b])));
                    }
                }
            }
            return std::make_pair(mixed, penalty);
        };

        std::vector<int> best_perm(clusters.size());
        std::iota(best_perm.begin(), best_perm.end(), 0);
        if (clusters.size() > 1 && clusters.size() <= 7) {
            std::vector<int> perm = best_perm;
            auto best_score = score_ordering(perm);
            while (std::next_permutation(perm.begin(), perm.end())) {
                const auto s = score_ordering(perm);
                if (s.first < best_score.first ||
                    (s.first == best_score.first && s.second < best_score.second - 1e-12)) {
                    best_score = s;
                    best_perm = perm;
                }
            }
        }
        order.clear();
        for (int ci : best_perm) {
            const auto& members = clusters[static_cast<size_t>(ci)].members;
            order.insert(order.end(), members.begin(), members.end());
        }
    }

    for (int start = 0; start < M; start += m) {
        Bundle b;
        for (int i = start; i < std::min(M, start + m); ++i) {
            b.plies.push_back(layup[static_cast<size_t>(order[static_cast<size_t>(i)])]);
        }
        bundles.push_back(std::move(b));
    }
    return bundles;
}

std::vector<Interval> stayout_intervals(const Ply& ply,
                                        const std::vector<StayOutZone>& zones,
                                        const ManufacturingConfig& config) {
    std::vector<Interval> intervals;
    const double half = config.overlap_width / 2.0;
    for (const StayOutZone& zone : zones) {
        if (zone.polygon.size() < 3) continue;
        Interval proj = project_polygon(zone.polygon, ply.transverse_dir());
        Interval band{proj.lo - ply.proj0() - half, proj.hi - ply.proj0() + half};
        band.lo = std::max(band.lo, 0.0);
        band.hi = std::min(band.hi, ply.width());
        if (!band.empty()) intervals.push_back(band);
    }
    return merge_intervals(std::move(intervals));
}

BundleContext::BundleContext(Bundle bundle, std::vector<StayOutZone> zones,
                             ManufacturingConfig config)
    : bundle_(std::move(bundle)), zones_(std::move(zones)), config_(std::move(config)) {
    const int M = num_plies();
    stayout_.resize(static_cast<size_t>(M));
    bands_.resize(static_cast<size_t>(M));
    for (int p = 0; p < M; ++p) {
        const Ply& ply = bundle_.plies[static_cast<size_t>(p)];
        stayout_[static_cast<size_t>(p)] = stayout_intervals(ply, zones_, config_);
        const VertexClasses classes = classify_vertices(ply);
        auto& bands = bands_[static_cast<size_t>(p)];
        for (int v : classes.small_piece) {
            const double off = dot(ply.polygon()[static_cast<size_t>(v)], ply.transverse_dir()) - ply.proj0();
            bands.push_back({v, 0, off, config_.small_min});
        }
        for (int v : classes.flimsy) {
            const double off = dot(ply.polygon()[static_cast<size_t>(v)], ply.transverse_dir()) - ply.proj0();
            bands.push_back({v, 1, off, config_.flimsy_min});
        }
        std::sort(bands.begin(), bands.end(), [](const VertexBand& a, const VertexBand& b) {
            if (a.offset != b.offset) return a.offset < b.offset;
            return a.vertex < b.vertex;
        });
    }
    // Orientation groups for the parallel constraints.
    group_.assign(static_cast<size_t>(M), -1);
    for (int p = 0; p < M; ++p) {
        if (group_[static_cast<size_t>(p)] >= 0) continue;
        group_[static_cast<size_t>(p)] = num_groups_;
        for (int q = p + 1; q < M; ++q) {
            if (group_[static_cast<size_t>(q)] < 0 &&
                plies_parallel(bundle_.plies[static_cast<size_t>(p)], bundle_.plies[static_cast<size_t>(q)])) {
                group_[static_cast<size_t>(q)] = num_groups_;
            }
        }
        ++num_groups_;
    }
}

double BundleContext::parallel_shift(int p, int q) const {
    const Ply& a = bundle_.plies[static_cast<size_t>(p)];
    const Ply& b = bundle_.plies[static_cast<size_t>(q)];
    return dot(b.origin() - a.origin(), a.transverse_dir());
}

double BundleContext::parallel_align(int p, int q) const {
    const Ply& a = bundle_.plies[static_cast<size_t>(p)];
    const Ply& b = bundle_.plies[static_cast<size_t>(q)];
    return dot(a.transverse_dir(), b.transverse_dir()) >= 0.0 ? 1.0 : -1.0;
}

SeamIndexer::SeamIndexer(const OffsetState& state) {
    var_of.resize(state.size());
    for (size_t p = 0; p < state.size(); ++p) {
        var_of[p].assign(state[p].size(), -1);
        for (size_t i = 1; i < state[p].size(); ++i) {
            var_of[p][i] = static_cast<int>(seams.size());
            seams.emplace_back(static_cast<int>(p), static_cast<int>(i));
        }
    }
}

int SeamIndexer::var(int ply, int index) const {
    if (index == 0) return -1;
    return var_of[static_cast<size_t>(ply)][static_cast<size_t>(index)];
}

namespace {

// Interior seams of one orientation group, with their positions expressed on
// the group's reference axis (the lowest ply index in the group).
struct GroupSeam {
    int ply;
    int index;
    double pos;
};

std::vector<std::vector<GroupSeam>> collect_groups(const BundleContext& ctx,
                                                   const OffsetState& state) {
    std::vector<std::vector<GroupSeam>> groups(static_cast<size_t>(ctx.num_groups()));
    std::vector<int> ref(static_cast<size_t>(ctx.num_groups()), -1);
    for (int p = 0; p < ctx.num_plies(); ++p) {
        const int g = ctx.orientation_group(p);
        if (ref[static_cast<size_t>(g)] < 0) ref[static_cast<size_t>(g)] = p;
    }
    for (int p = 0; p < ctx.num_plies(); ++p) {
        const int g = ctx.orientation_group(p);
        const int r = ref[static_cast<size_t>(g)];
        const double shift = ctx.parallel_shift(r, p);
        const double align = ctx.parallel_align(r, p);
        for (size_t i = 1; i < state[static_cast<size_t>(p)].size(); ++i) {
            groups[static_cast<size_t>(g)].push_back(
                {p, static_cast<int>(i), shift + align * state[static_cast<size_t>(p)][i]});
        }
    }
    for (auto& g : groups) {
        std::sort(g.begin(), g.end(), [](const GroupSeam& a, const GroupSeam& b) {
            if (a.pos != b.pos) return a.pos < b.pos;
            if (a.ply != b.ply) return a.ply < b.ply;
            return a.index < b.index;
        });
    }
    return groups;
}

// Reference ply of each orientation group (lowest ply index).
std::vector<int> group_refs(const BundleContext& ctx) {
    std::vector<int> ref(static_cast<size_t>(ctx.num_groups()), -1);
    for (int p = 0; p < ctx.num_plies(); ++p) {
        const int g = ctx.orientation_group(p);
        if (ref[static_cast<size_t>(g)] < 0) ref[static_cast<size_t>(g)] = p;
    }
    return ref;
}

}  // namespace

BranchAssignment derive_branches(const BundleContext& ctx, const OffsetState& state) {
    BranchAssignment out;
    const auto groups = collect_groups(ctx, state);
    const auto refs = group_refs(ctx);

    // Parallel pairs: cross-ply interior pairs ordered along the group axis;
    // same-ply adjacent pairs (boundary included) are fixed by seam order,
    // expressed on the same reference axis as the cross-ply rows.
    for (const auto& seams : groups) {
        for (size_t a = 0; a < seams.size(); ++a) {
            for (size_t b = a + 1; b < seams.size(); ++b) {
                const GroupSeam& sa = seams[a];
                const GroupSeam& sb = seams[b];
                if (sa.ply == sb.ply) continue;
                const bool a_first = std::make_pair(sa.ply, sa.index) < std::make_pair(sb.ply, sb.index);
                const GroupSeam& lo = a_first ? sa : sb;
                const GroupSeam& hi = a_first ? sb : sa;
                // +1: the lexicographically later seam sits farther along the
                // reference axis.  `a` precedes `b` in sorted position order.
                out.parallel[{lo.ply, lo.index, hi.ply, hi.index}] = a_first ? 1 : -1;
            }
        }
    }
    for (int p = 0; p < ctx.num_plies(); ++p) {
        const int ref = refs[static_cast<size_t>(ctx.orientation_group(p))];
        const int sign = ctx.parallel_align(ref, p) >= 0.0 ? 1 : -1;
        for (size_t i = 1; i < state[static_cast<size_t>(p)].size(); ++i) {
            out.parallel[{p, static_cast<int>(i) - 1, p, static_cast<int>(i)}] = sign;
        }
    }

    // Stay-out and vertex keep-away sides.
    for (int p = 0; p < ctx.num_plies(); ++p) {
        const auto& offsets = state[static_cast<size_t>(p)];
        const auto& zones = ctx.stayout(p);
        const auto& bands = ctx.vertex_bands(p);
        for (size_t i = 1; i < offsets.size(); ++i) {
            for (size_t z = 0; z < zones.size(); ++z) {
                const double mid = 0.5 * (zones[z].lo + zones[z].hi);
                out.stayout[{p, static_cast<int>(i), static_cast<int>(z)}] =
                    offsets[i] < mid ? -1 : 1;
            }
            for (size_t b = 0; b < bands.size(); ++b) {
                out.vertex[{p, static_cast<int>(i), static_cast<int>(b)}] =
                    offsets[i] < bands[b].offset ? -1 : 1;
            }
        }
    }

    // Active seam triples: three pairwise non-parallel plies whose seam lines
    // cross inside the union of the involved polygons.
    const int M = ctx.num_plies();
    for (int p = 0; p < M; ++p) {
        for (int q = p + 1; q < M; ++q) {
            if (ctx.parallel(p, q)) continue;
            for (int r = q + 1; r < M; ++r) {
                if (ctx.parallel(p, r) || ctx.parallel(q, r)) continue;
                const Ply& P = ctx.ply(p);
                const Ply& Q = ctx.ply(q);
                const Ply& R = ctx.ply(r);
                for (size_t ip = 1; ip < state[static_cast<size_t>(p)].size(); ++ip) {
                    const LineStd lp = seam_to_line(P, {state[static_cast<size_t>(p)][ip]});
                    for (size_t iq = 1; iq < state[static_cast<size_t>(q)].size(); ++iq) {
                        const LineStd lq = seam_to_line(Q, {state[static_cast<size_t>(q)][iq]});
                        for (size_t ir = 1; ir < state[static_cast<size_t>(r)].size(); ++ir) {
                            const LineStd lr = seam_to_line(R, {state[static_cast<size_t>(r)][ir]});
                            const auto x_pq = line_intersection(lp, lq);
                            const auto x_qr = line_intersection(lq, lr);
                            const auto x_rp = line_intersection(lr, lp);
                            if (!x_pq || !x_qr || !x_rp) continue;
                            auto in_union = [&](const Point2& pt) {
                                return point_in_polygon(pt, P.polygon()) ||
                                       point_in_polygon(pt, Q.polygon()) ||
                                       point_in_polygon(pt, R.polygon());
                            };
                            if (!in_union(*x_pq) || !in_union(*x_qr) || !in_union(*x_rp)) continue;
                            const int ea = encode_seam(p, static_cast<int>(ip));
                            const int eb = encode_seam(q, static_cast<int>(iq));
                            const int ec = encode_seam(r, static_cast<int>(ir));
                            const LineStd lines[3] = {lp, lq, lr};
                            for (int combo = 0; combo < 3; ++combo) {
                                // combo singles out seam (combo+2)%3 as "k".
                                const LineStd& li = lines[combo];
                                const LineStd& lj = lines[(combo + 1) % 3];
                                const LineStd& lk = lines[(combo + 2) % 3];
                                const double det = li.a * lj.b - lj.a * li.b;
                                const double k1 = (lj.a * lk.b - lk.a * lj.b) / det;
                                const double k2 = (lk.a * li.b - li.a * lk.b) / det;
                                const double expr = k1 * li.c + k2 * lj.c + lk.c;
                                out.triple[{ea, eb, ec, combo}] = expr >= 0.0 ? 1 : -1;
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

std::vector<LpRow> spool_rows(const BundleContext& ctx, const SeamIndexer& ix,
                              const OffsetState& state) {
    std::vector<LpRow> rows;
    const double w_min = ctx.config().min_subply_width;
    const double gap_max = ctx.config().spool_width - ctx.config().overlap_width;
    for (size_t p = 0; p < state.size(); ++p) {
        for (size_t i = 1; i < state[p].size(); ++i) {
            const int v_cur = ix.var(static_cast<int>(p), static_cast<int>(i));
            const int v_prev = ix.var(static_cast<int>(p), static_cast<int>(i) - 1);
            LpRow ge;
            ge.coeffs.assign(static_cast<size_t>(ix.num_vars()), 0.0);
            ge.coeffs[static_cast<size_t>(v_cur)] = 1.0;
            if (v_prev >= 0) ge.coeffs[static_cast<size_t>(v_prev)] = -1.0;
            ge.rel = Rel::Ge;
            ge.rhs = w_min;
            LpRow le = ge;
            le.rel = Rel::Le;
            le.rhs = gap_max;
            rows.push_back(std::move(ge));
            rows.push_back(std::move(le));
        }
    }
    return rows;
}

namespace {

// Builds the separation row sigma * (pos_b - pos_a) >= w_l over the group's
// reference axis, where pos = shift + align * x.
LpRow parallel_pair_row(const BundleContext& ctx, const SeamIndexer& ix, int ref,
                        int ply_a, int idx_a, int ply_b, int idx_b, int sigma) {
    LpRow row;
    row.coeffs.assign(static_cast<size_t>(ix.num_vars()), 0.0);
    row.rel = Rel::Ge;
    double constant = 0.0;
    auto add = [&](int ply, int idx, double sign) {
        const double shift = ctx.parallel_shift(ref, ply);
        const double align = ctx.parallel_align(ref, ply);
        constant += sign * shift;
        const int v = ix.var(ply, idx);
        if (v >= 0) {
            row.coeffs[static_cast<size_t>(v)] += sign * align;
        }
        // Boundary seams contribute only the shift (offset 0).
    };
    add(ply_b, idx_b, sigma);
    add(ply_a, idx_a, -sigma);
    row.rhs = ctx.config().overlap_width - constant;
    return row;
}

}  // namespace

std::vector<LpRow> parallel_rows(const BundleContext& ctx, const SeamIndexer& ix,
                                 const OffsetState& state, const BranchAssignment& branches) {
    std::vector<LpRow> rows;
    const auto refs = group_refs(ctx);
    (void)state;
    for (const auto& [key, sigma] : branches.parallel) {
        const auto [ply_a, idx_a, ply_b, idx_b] = key;
        const int ref = refs[static_cast<size_t>(ctx.orientation_group(ply_a))];
        rows.push_back(parallel_pair_row(ctx, ix, ref, ply_a, idx_a, ply_b, idx_b, sigma));
    }
    return rows;
}

std::vector<LpRow> parallel_chain_rows(const BundleContext& ctx, const SeamIndexer& ix,
                                       const OffsetState& state) {
    std::vector<LpRow> rows;
    const auto groups = collect_groups(ctx, state);
    const auto refs = group_refs(ctx);
    for (size_t g = 0; g < groups.size(); ++g) {
        const auto& seams = groups[g];
        for (size_t i = 0; i + 1 < seams.size(); ++i) {
            rows.push_back(parallel_pair_row(ctx, ix, refs[g], seams[i].ply, seams[i].index,
                                             seams[i + 1].ply, seams[i + 1].index, 1));
        }
    }
    // Same-ply adjacency against the boundary seam, kept for configurations
    // where min_subply_width < overlap_width.
    for (int p = 0; p < ctx.num_plies(); ++p) {
        if (state[static_cast<size_t>(p)].size() >= 2) {
            rows.push_back(parallel_pair_row(ctx, ix, p, p, 0, p, 1, 1));
        }
    }
    return rows;
}

std::vector<LpRow> triple_rows(const BundleContext& ctx, const SeamIndexer& ix,
                               const OffsetState& state, const BranchAssignment& branches) {
    std::vector<LpRow> rows;
    (void)state;
    const double w_l = ctx.config().overlap_width;
    for (const auto& [key, sigma] : branches.triple) {
        const auto [ea, eb, ec, combo] = key;
        const int seams[3][2] = {
            {ea / BranchAssignment::kSeamEncode, ea % BranchAssignment::kSeamEncode},
            {eb / BranchAssignment::kSeamEncode, eb % BranchAssignment::kSeamEncode},
            {ec / BranchAssignment::kSeamEncode, ec % BranchAssignment::kSeamEncode}};
        const int pi = seams[combo][0], ii = seams[combo][1];
        const int pj = seams[(combo + 1) % 3][0], ij = seams[(combo + 1) % 3][1];
        const int pk = seams[(combo + 2) % 3][0], ik = seams[(combo + 2) % 3][1];
        const Ply& P = ctx.ply(pi);
        const Ply& Q = ctx.ply(pj);
        const Ply& R = ctx.ply(pk);
        const double ai = P.transverse_dir().x, bi = P.transverse_dir().y;
        const double aj = Q.transverse_dir().x, bj = Q.transverse_dir().y;
        const double ak = R.transverse_dir().x, bk = R.transverse_dir().y;
        const double det = ai * bj - aj * bi;
        const double k1 = (aj * bk - ak * bj) / det;
        const double k2 = (ak * bi - ai * bk) / det;
        // Signed distance of the i^j crossing from line k is
        // k1*c_i + k2*c_j + c_k with c = c0 - x; require |distance| >=
        // support of the i^j overlap parallelogram along k's normal + w_l/2.
        const double d_min = 0.5 * w_l * (std::abs(k1) + std::abs(k2) + 1.0);
        const double constant = k1 * ctx.c0(pi) + k2 * ctx.c0(pj) + ctx.c0(pk);
        LpRow row;
        row.coeffs.assign(static_cast<size_t>(ix.num_vars()), 0.0);
        row.rel = Rel::Ge;
        const double s = static_cast<double>(sigma);
        row.coeffs[static_cast<size_t>(ix.var(pi, ii))] += -s * k1;
        row.coeffs[static_cast<size_t>(ix.var(pj, ij))] += -s * k2;
        row.coeffs[static_cast<size_t>(ix.var(pk, ik))] += -s;
        row.rhs = d_min - s * constant;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<LpRow> stayout_rows(const BundleContext& ctx, const SeamIndexer& ix,
                                const OffsetState& state, const BranchAssignment& branches) {
    std::vector<LpRow> rows;
    (void)state;
    for (const auto& [key, side] : branches.stayout) {
        const auto [ply, idx, z] = key;
        const Interval& iv = ctx.stayout(ply)[static_cast<size_t>(z)];
        LpRow row;
        row.coeffs.assign(static_cast<size_t>(ix.num_vars()), 0.0);
        row.coeffs[static_cast<size_t>(ix.var(ply, idx))] = 1.0;
        if (side < 0) {
            row.rel = Rel::Le;
            row.rhs = iv.lo;
        } else {
            row.rel = Rel::Ge;
            row.rhs = iv.hi;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<LpRow> quality_rows(const BundleContext& ctx, const SeamIndexer& ix,
                                const OffsetState& state, const BranchAssignment& branches) {
    std::vector<LpRow> rows;
    (void)state;
    for (const auto& [key, side] : branches.vertex) {
        const auto [ply, idx, b] = key;
        const VertexBand& band = ctx.vertex_bands(ply)[static_cast<size_t>(b)];
        LpRow row;
        row.coeffs.assign(static_cast<size_t>(ix.num_vars()), 0.0);
        row.coeffs[static_cast<size_t>(ix.var(ply, idx))] = 1.0;
        if (side < 0) {
            row.rel = Rel::Le;
            row.rhs = band.offset - band.min_dist;
        } else {
            row.rel = Rel::Ge;
            row.rhs = band.offset + band.min_dist;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double max_row_violation(const std::vector<LpRow>& rows, const std::vector<double>& x) {
    double worst = 0.0;
    for (const LpRow& row : rows) {
        double lhs = 0.0;
        for (size_t j = 0; j < row.coeffs.size(); ++j) lhs += row.coeffs[j] * x[j];
        if (row.rel == Rel::Le) worst = std::max(worst, lhs - row.rhs);
        else if (row.rel == Rel::Ge) worst = std::max(worst, row.rhs - lhs);
        else worst = std::max(worst, std::abs(lhs - row.rhs));
    }
    return worst;
}

std::vector<Subspace> enumerate_subspaces(const BundleContext& ctx, const OffsetState& state,
                                          int ply) {
    std::vector<Subspace> out;
    const auto& offsets = state[static_cast<size_t>(ply)];
    if (offsets.empty()) return out;
    const double x_prev = offsets.back();
    const double w_l = ctx.config().overlap_width;
    const Ply& P = ctx.ply(ply);
    Interval window{x_prev + ctx.config().min_subply_width,
                    std::min(x_prev + ctx.config().spool_width - w_l, P.width())};
    if (window.empty()) return out;

    std::vector<Interval> bands;
    for (const Interval& z : ctx.stayout(ply)) bands.push_back(z);
    for (const VertexBand& vb : ctx.vertex_bands(ply)) {
        if (vb.min_dist > 0.0) bands.push_back({vb.offset - vb.min_dist, vb.offset + vb.min_dist});
    }
    // Keep-out bands of existing parallel seams, expressed on this ply's axis.
    for (int q = 0; q < ctx.num_plies(); ++q) {
        if (!ctx.parallel(ply, q)) continue;
        const double shift = ctx.parallel_shift(ply, q);
        const double align = ctx.parallel_align(ply, q);
        for (size_t i = 1; i < state[static_cast<size_t>(q)].size(); ++i) {
            const double pos = shift + align * state[static_cast<size_t>(q)][i];
            bands.push_back({pos - w_l, pos + w_l});
        }
    }
    // The ply's own boundary seam when the new seam would be adjacent to it.
    if (offsets.size() == 1) bands.push_back({-w_l, w_l});

    // The bands are open: a seam may sit exactly on an endpoint.  Shrink them
    // by a hair so roundoff in the endpoint arithmetic (e.g. pos - w_l landing
    // 1e-17 below the window edge) cannot swallow such boundary candidates.
    // The LP re-checks true feasibility within its own tolerance.
    constexpr double kBandEps = 1e-9;
    for (Interval& b : bands) {
        b.lo += kBandEps;
        b.hi -= kBandEps;
    }

    std::vector<Interval> free = subtract_open_intervals(window, std::move(bands));
    std::sort(free.begin(), free.end(), [](const Interval& a, const Interval& b) {
        return a.hi > b.hi;
    });
    for (const Interval& iv : free) out.push_back({iv, iv.hi});
    return out;
}

}  // namespace plypart
