#include "plypart/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "plypart/geometry.hpp"
#include "plypart/lp.hpp"

namespace plypart {

namespace {

constexpr double kFeasTol = 1e-8;    // row-violation acceptance on LP results
constexpr double kTermEps = 1e-9;    // slack on the per-ply coverage check
constexpr int kMaxFixupRounds = 8;   // revalidation re-solve budget

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Extent still to cover on ply p: distance from the last seam to the far
// boundary plus the half overlap the final piece must carry.
double remainder_extent(const BundleContext& ctx, const OffsetState& state, int p) {
    return ctx.ply(p).width() - state[static_cast<size_t>(p)].back() +
           ctx.config().overlap_width / 2.0;
}

// First ply (bundle order) whose remainder does not fit one spool width,
// -1 when the design fully partitions.
int next_ply(const BundleContext& ctx, const OffsetState& state) {
    for (int p = 0; p < ctx.num_plies(); ++p) {
        if (remainder_extent(ctx, state, p) > ctx.config().spool_width + kTermEps) return p;
    }
    return -1;
}

int total_seams(const OffsetState& state) {
    int n = 0;
    for (const auto& offsets : state) n += static_cast<int>(offsets.size()) - 1;
    return n;
}

LinearProgram assemble_lp(const BundleContext& ctx, const SeamIndexer& ix,
                          const OffsetState& state, const BranchAssignment& branches,
                          bool chain_parallel, int bound_var, Interval bound_iv) {
    LinearProgram lp;
    lp.num_vars = ix.num_vars();
    lp.objective.assign(static_cast<size_t>(lp.num_vars), 0.0);
    lp.set_bounds_default();
    for (size_t k = 0; k < ix.seams.size(); ++k) {
        lp.upper[k] = ctx.ply(ix.seams[k].first).width();
    }
    for (int p = 0; p < ctx.num_plies(); ++p) {
        const int last = static_cast<int>(state[static_cast<size_t>(p)].size()) - 1;
        if (last >= 1) lp.objective[static_cast<size_t>(ix.var(p, last))] = -1.0;
    }
    if (bound_var >= 0) {
        lp.lower[static_cast<size_t>(bound_var)] =
            std::max(lp.lower[static_cast<size_t>(bound_var)], bound_iv.lo);
        lp.upper[static_cast<size_t>(bound_var)] =
            std::min(lp.upper[static_cast<size_t>(bound_var)], bound_iv.hi);
    }
    auto append = [&lp](std::vector<LpRow> rows) {
        for (auto& r : rows) lp.rows.push_back(std::move(r));
    };
    append(spool_rows(ctx, ix, state));
    if (chain_parallel) {
        append(parallel_chain_rows(ctx, ix, state));
    } else {
        append(parallel_rows(ctx, ix, state, branches));
    }
    append(triple_rows(ctx, ix, state, branches));
    append(stayout_rows(ctx, ix, state, branches));
    append(quality_rows(ctx, ix, state, branches));
    return lp;
}

// Non-last interior seams have no weight in the coverage objective, so the
// optimum is a degenerate face; a second solve over that face pulls them as
// far back as the rows allow, which canonicalizes the returned vertex.
std::vector<double> secondary_objective(const BundleContext& ctx, const SeamIndexer& ix,
                                        const OffsetState& state) {
    std::vector<double> c(static_cast<size_t>(ix.num_vars()), 0.0);
    for (int p = 0; p < ctx.num_plies(); ++p) {
        const int last = static_cast<int>(state[static_cast<size_t>(p)].size()) - 1;
        for (int i = 1; i < last; ++i) c[static_cast<size_t>(ix.var(p, i))] = 1.0;
    }
    return c;
}

bool lp_ok(const LpResult& res) {
    return res.status == LpStatus::Optimal && res.max_violation <= kFeasTol;
}

LpResult canonical_solve(const LinearProgram& lp, const std::vector<double>& secondary,
                         long long& lp_solves) {
    LpResult first = solve(lp);
    ++lp_solves;
    if (!lp_ok(first)) return first;
    bool has_secondary = false;
    for (double v : secondary) has_secondary = has_secondary || v != 0.0;
    if (!has_secondary) return first;

    // Pin the optimum exactly: the stage-1 vertex stays feasible, and any
    // slack here would let last seams drift below their canonical positions.
    LinearProgram tie = lp;
    LpRow pin;
    pin.coeffs = lp.objective;
    pin.rel = Rel::Le;
    pin.rhs = first.objective;
    tie.rows.push_back(std::move(pin));
    tie.objective = secondary;
    LpResult second = solve(tie);
    ++lp_solves;
    if (!lp_ok(second)) return first;
    double primary = 0.0;
    for (size_t j = 0; j < lp.objective.size(); ++j) primary += lp.objective[j] * second.x[j];
    second.objective = primary;
    return second;
}

OffsetState apply_solution(const SeamIndexer& ix, OffsetState state,
                           const std::vector<double>& x) {
    for (size_t k = 0; k < ix.seams.size(); ++k) {
        const auto [p, i] = ix.seams[k];
        state[static_cast<size_t>(p)][static_cast<size_t>(i)] = x[k];
    }
    return state;
}

double primary_value(const OffsetState& state) {
    double sum = 0.0;
    for (const auto& offsets : state) sum += offsets.back();
    return -sum;
}

std::string serialize_state(const OffsetState& state) {
    std::string out;
    char buf[32];
    for (const auto& offsets : state) {
        for (size_t i = 1; i < offsets.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.12e,", offsets[i]);
            out += buf;
        }
        out += ';';
    }
    return out;
}

// One seam added to `ply`, trying subspaces farthest-first; all bundle seams
// re-optimized at the probed branch pattern.  Counts explored candidates into
// the report; fills `fail_msg` (if given) when every subspace is infeasible.
std::optional<OffsetState> try_insert(const BundleContext& ctx, const OffsetState& state,
                                      int ply, SearchReport& rep, std::string* fail_msg) {
    const auto subs = enumerate_subspaces(ctx, state, ply);
    for (const Subspace& sub : subs) {
        OffsetState cand = state;
        cand[static_cast<size_t>(ply)].push_back(sub.probe);
        const SeamIndexer ix(cand);
        const BranchAssignment branches = derive_branches(ctx, cand);
        const int new_var =
            ix.var(ply, static_cast<int>(cand[static_cast<size_t>(ply)].size()) - 1);
        const LinearProgram lp =
            assemble_lp(ctx, ix, cand, branches, /*chain_parallel=*/true, new_var, sub.interval);
        const LpResult res = canonical_solve(lp, secondary_objective(ctx, ix, cand), rep.lp_solves);
        if (lp_ok(res)) return apply_solution(ix, cand, res.x);
    }
    if (fail_msg) {
        const double x_prev = state[static_cast<size_t>(ply)].back();
        const double lo = x_prev + ctx.config().min_subply_width;
        const double hi = std::min(x_prev + ctx.config().spool_width - ctx.config().overlap_width,
                                   ctx.ply(ply).width());
        char buf[192];
        std::snprintf(buf, sizeof(buf),
                      "ply '%s': no feasible subspace in window [%.6f, %.6f] (%zu candidate(s))",
                      ctx.ply(ply).id().c_str(), lo, hi, subs.size());
        *fail_msg = buf;
    }
    return std::nullopt;
}

void check_rows(const std::string& kind, const std::vector<LpRow>& rows,
                const std::vector<std::string>& labels, const std::vector<double>& x,
                std::vector<Violation>& out) {
    for (size_t r = 0; r < rows.size(); ++r) {
        const LpRow& row = rows[r];
        double lhs = 0.0;
        for (size_t j = 0; j < row.coeffs.size(); ++j) lhs += row.coeffs[j] * x[j];
        double amount = 0.0;
        if (row.rel == Rel::Le) amount = lhs - row.rhs;
        else if (row.rel == Rel::Ge) amount = row.rhs - lhs;
        else amount = std::abs(lhs - row.rhs);
        if (amount > kFeasTol) {
            out.push_back({kind, r < labels.size() ? labels[r] : "row " + std::to_string(r), amount});
        }
    }
}

std::vector<double> flatten_offsets(const SeamIndexer& ix, const OffsetState& state) {
    std::vector<double> x(static_cast<size_t>(ix.num_vars()), 0.0);
    for (size_t k = 0; k < ix.seams.size(); ++k) {
        const auto [p, i] = ix.seams[k];
        x[k] = state[static_cast<size_t>(p)][static_cast<size_t>(i)];
    }
    return x;
}

std::vector<Violation> validate_state(const BundleContext& ctx, const OffsetState& state) {
    std::vector<Violation> out;
    char buf[224];

    for (int p = 0; p < ctx.num_plies(); ++p) {
        const auto& offsets = state[static_cast<size_t>(p)];
        const std::string& id = ctx.ply(p).id();
        if (offsets.empty() || std::abs(offsets.front()) > 1e-12) {
            out.push_back({"structure", "ply '" + id + "': missing boundary seam at 0", 0.0});
            continue;
        }
        for (size_t i = 1; i < offsets.size(); ++i) {
            if (offsets[i] <= offsets[i - 1]) {
                std::snprintf(buf, sizeof(buf), "ply '%s': offsets not increasing at index %zu",
                              id.c_str(), i);
                out.push_back({"structure", buf, offsets[i - 1] - offsets[i]});
            }
        }
    }
    if (!out.empty()) return out;

    const SeamIndexer ix(state);
    const BranchAssignment branches = derive_branches(ctx, state);
    const std::vector<double> x = flatten_offsets(ix, state);

    {
        std::vector<std::string> labels;
        for (size_t p = 0; p < state.size(); ++p) {
            const std::string& id = ctx.ply(static_cast<int>(p)).id();
            for (size_t i = 1; i < state[p].size(); ++i) {
                std::snprintf(buf, sizeof(buf), "ply '%s' gap %zu-%zu below min", id.c_str(), i - 1, i);
                labels.emplace_back(buf);
                std::snprintf(buf, sizeof(buf), "ply '%s' gap %zu-%zu above max", id.c_str(), i - 1, i);
                labels.emplace_back(buf);
            }
        }
        check_rows("gap", spool_rows(ctx, ix, state), labels, x, out);
    }
    {
        std::vector<std::string> labels;
        for (const auto& [key, sigma] : branches.parallel) {
            const auto [pa, ia, pb, ib] = key;
            std::snprintf(buf, sizeof(buf), "ply '%s' seam %d vs ply '%s' seam %d (side %+d)",
                          ctx.ply(pa).id().c_str(), ia, ctx.ply(pb).id().c_str(), ib, sigma);
            labels.emplace_back(buf);
        }
        check_rows("parallel", parallel_rows(ctx, ix, state, branches), labels, x, out);
    }
    {
        std::vector<std::string> labels;
        for (const auto& [key, sigma] : branches.triple) {
            const auto [ea, eb, ec, combo] = key;
            std::snprintf(buf, sizeof(buf),
                          "seams %d:%d / %d:%d / %d:%d combination %d (sign %+d)",
                          ea / BranchAssignment::kSeamEncode, ea % BranchAssignment::kSeamEncode,
                          eb / BranchAssignment::kSeamEncode, eb % BranchAssignment::kSeamEncode,
                          ec / BranchAssignment::kSeamEncode, ec % BranchAssignment::kSeamEncode,
                          combo);
            labels.emplace_back(buf);
        }
        check_rows("triple_row", triple_rows(ctx, ix, state, branches), labels, x, out);
    }
    {
        std::vector<std::string> labels;
        for (const auto& [key, side] : branches.stayout) {
            const auto [p, i, z] = key;
            std::snprintf(buf, sizeof(buf), "ply '%s' seam %d vs zone interval %d (side %+d)",
                          ctx.ply(p).id().c_str(), i, z, side);
            labels.emplace_back(buf);
        }
        check_rows("stayout", stayout_rows(ctx, ix, state, branches), labels, x, out);
    }
    {
        std::vector<std::string> labels;
        for (const auto& [key, side] : branches.vertex) {
            const auto [p, i, b] = key;
            const VertexBand& band = ctx.vertex_bands(p)[static_cast<size_t>(b)];
            std::snprintf(buf, sizeof(buf), "ply '%s' seam %d vs vertex %d (%s, side %+d)",
                          ctx.ply(p).id().c_str(), i, band.vertex,
                          band.kind == 0 ? "small-piece" : "flimsy", side);
            labels.emplace_back(buf);
        }
        check_rows("quality", quality_rows(ctx, ix, state, branches), labels, x, out);
    }

    // Exact geometric backstop 1: no triple of overlap strips from three
    // mutually non-parallel plies may enclose area inside all three outlines.
    const double half = ctx.config().overlap_width / 2.0;
    for (int p = 0; p < ctx.num_plies(); ++p) {
        for (int q = p + 1; q < ctx.num_plies(); ++q) {
            if (ctx.parallel(p, q)) continue;
            std::vector<Polygon> pq = clip_polygon(ctx.ply(p).polygon(), ctx.ply(q).polygon());
            if (pq.empty()) continue;
            for (int r = q + 1; r < ctx.num_plies(); ++r) {
                if (ctx.parallel(p, r) || ctx.parallel(q, r)) continue;
                std::vector<Polygon> domain;
                for (const Polygon& piece : pq) {
                    for (Polygon& d : clip_polygon(piece, ctx.ply(r).polygon())) {
                        domain.push_back(std::move(d));
                    }
                }
                if (domain.empty()) continue;
                const auto& off_p = state[static_cast<size_t>(p)];
                const auto& off_q = state[static_cast<size_t>(q)];
                const auto& off_r = state[static_cast<size_t>(r)];
                for (size_t ip = 1; ip < off_p.size(); ++ip) {
                    const Strip s1{seam_to_line(ctx.ply(p), {off_p[ip]}), half};
                    for (size_t iq = 1; iq < off_q.size(); ++iq) {
                        const Strip s2{seam_to_line(ctx.ply(q), {off_q[iq]}), half};
                        for (size_t ir = 1; ir < off_r.size(); ++ir) {
                            const Strip s3{seam_to_line(ctx.ply(r), {off_r[ir]}), half};
                            double area = 0.0;
                            for (const Polygon& d : domain) {
                                area += triple_overlap_area(s1, s2, s3, d);
                            }
                            if (area > 1e-10) {
                                std::snprintf(buf, sizeof(buf),
                                              "strips '%s':%zu / '%s':%zu / '%s':%zu stack: area %.3e",
                                              ctx.ply(p).id().c_str(), ip, ctx.ply(q).id().c_str(),
                                              iq, ctx.ply(r).id().c_str(), ir, area);
                                out.push_back({"triple_area", buf, area});
                            }
                        }
                    }
                }
            }
        }
    }

    // Exact geometric backstop 2: overlap strips stay clear of every
    // stay-out polygon.
    for (int p = 0; p < ctx.num_plies(); ++p) {
        const auto& offsets = state[static_cast<size_t>(p)];
        for (size_t i = 1; i < offsets.size(); ++i) {
            const LineStd line = seam_to_line(ctx.ply(p), {offsets[i]});
            for (size_t z = 0; z < ctx.zones().size(); ++z) {
                const Polygon& zone = ctx.zones()[z].polygon;
                if (zone.size() < 3) continue;
                double area = 0.0;
                for (const Polygon& below :
                     clip_halfplane(zone, {line.a, line.b, line.c - half}, false)) {
                    for (const Polygon& in_band :
                         clip_halfplane(below, {line.a, line.b, line.c + half}, true)) {
                        area += std::abs(polygon_area(in_band));
                    }
                }
                if (area > 1e-12) {
                    std::snprintf(buf, sizeof(buf),
                                  "ply '%s' seam %zu strip cuts zone %zu: area %.3e",
                                  ctx.ply(p).id().c_str(), i, z, area);
                    out.push_back({"stayout_area", buf, area});
                }
            }
        }
    }
    return out;
}

// Insertion sweeps alternated with full re-solves at the final branch
// assignment until the state both fully partitions and validates clean.
bool run_to_valid(const BundleContext& ctx, OffsetState& state, SearchReport& rep,
                  std::string& msg) {
    for (int round = 0; round < kMaxFixupRounds; ++round) {
        for (int p = next_ply(ctx, state); p >= 0; p = next_ply(ctx, state)) {
            auto next = try_insert(ctx, state, p, rep, &msg);
            if (!next) return false;
            state = std::move(*next);
            ++rep.nodes_explored;
        }
        const std::vector<Violation> viols = validate_state(ctx, state);
        if (viols.empty()) return true;

        const SeamIndexer ix(state);
        const BranchAssignment branches = derive_branches(ctx, state);
        const LinearProgram lp = assemble_lp(ctx, ix, state, branches,
                                             /*chain_parallel=*/false, -1, Interval{});
        const LpResult res = canonical_solve(lp, secondary_objective(ctx, ix, state), rep.lp_solves);
        if (!lp_ok(res)) {
            msg = "revalidation solve infeasible at the final branch assignment (" +
                  viols.front().kind + ": " + viols.front().detail + ")";
            return false;
        }
        const OffsetState fixed = apply_solution(ix, state, res.x);
        if (fixed == state) {
            msg = "revalidation could not clear: " + viols.front().kind + ": " +
                  viols.front().detail;
            return false;
        }
        state = fixed;
        ++rep.nodes_explored;
    }
    msg = "revalidation did not converge within " + std::to_string(kMaxFixupRounds) + " rounds";
    return false;
}

PartitionOutcome finish(const BundleContext& ctx, OffsetState state, SearchReport rep,
                        bool complete, std::string msg, Clock::time_point t0) {
    PartitionOutcome out;
    out.complete = complete;
    rep.outcome = complete ? SearchOutcome::Complete : SearchOutcome::Infeasible;
    rep.wall_time_seconds = seconds_since(t0);
    out.report = rep;
    out.design = design_from_state(ctx, state);
    out.message = std::move(msg);
    return out;
}

}  // namespace

OffsetState state_from_design(const BundleContext& ctx, const Design& design) {
    OffsetState state(static_cast<size_t>(ctx.num_plies()));
    for (int p = 0; p < ctx.num_plies(); ++p) {
        const auto it = design.seams.find(ctx.ply(p).id());
        if (it == design.seams.end() || it->second.empty()) {
            state[static_cast<size_t>(p)] = {0.0};
        } else {
            state[static_cast<size_t>(p)] = it->second;
        }
    }
    return state;
}

Design design_from_state(const BundleContext& ctx, const OffsetState& state) {
    Design d;
    for (int p = 0; p < ctx.num_plies(); ++p) {
        d.seams[ctx.ply(p).id()] = state[static_cast<size_t>(p)];
    }
    d.recompute_objective();
    return d;
}

std::optional<Design> insert_seam(const BundleContext& ctx, const Design& design, int ply) {
    if (ply < 0 || ply >= ctx.num_plies()) throw std::invalid_argument("insert_seam: bad ply index");
    OffsetState state = state_from_design(ctx, design);
    SearchReport rep;
    auto next = try_insert(ctx, state, ply, rep, nullptr);
    if (!next) return std::nullopt;
    return design_from_state(ctx, *next);
}

PartitionOutcome greedy_partition(const Bundle& bundle, const std::vector<StayOutZone>& zones,
                                  const ManufacturingConfig& config) {
    config.validate();
    const auto t0 = Clock::now();
    BundleContext ctx(bundle, zones, config);
    OffsetState state(static_cast<size_t>(ctx.num_plies()), std::vector<double>{0.0});
    SearchReport rep;
    rep.nodes_explored = 1;
    std::string msg;
    const bool complete = run_to_valid(ctx, state, rep, msg);
    return finish(ctx, std::move(state), rep, complete, std::move(msg), t0);
}

PartitionOutcome beam_partition(const Bundle& bundle, const std::vector<StayOutZone>& zones,
                                const ManufacturingConfig& config, int beam_width) {
    if (beam_width < 1) throw std::invalid_argument("beam_partition: beam_width must be >= 1");
    config.validate();
    const auto t0 = Clock::now();
    BundleContext ctx(bundle, zones, config);

    struct BeamNode {
        OffsetState state;
        double primary;
        std::string key;
    };

    OffsetState root(static_cast<size_t>(ctx.num_plies()), std::vector<double>{0.0});
    SearchReport rep;
    rep.nodes_explored = 1;

    BeamNode best_partial{root, primary_value(root), serialize_state(root)};
    std::vector<BeamNode> frontier;
    frontier.push_back(best_partial);

    // Seam-count ceiling: gaps are at least min_subply_width wide.
    int cap = 4;
    for (int p = 0; p < ctx.num_plies(); ++p) {
        cap += static_cast<int>(ctx.ply(p).width() / config.min_subply_width) + 1;
    }

    if (next_ply(ctx, root) < 0) {
        std::string msg;
        const bool complete = run_to_valid(ctx, root, rep, msg);
        return finish(ctx, std::move(root), rep, complete, std::move(msg), t0);
    }

    for (int gen = 1; gen <= cap; ++gen) {
        std::vector<BeamNode> children;
        for (const BeamNode& node : frontier) {
            const int p = next_ply(ctx, node.state);
            const auto subs = enumerate_subspaces(ctx, node.state, p);
            for (const Subspace& sub : subs) {
                OffsetState cand = node.state;
                cand[static_cast<size_t>(p)].push_back(sub.probe);
                const SeamIndexer ix(cand);
                const BranchAssignment branches = derive_branches(ctx, cand);
                const int new_var =
                    ix.var(p, static_cast<int>(cand[static_cast<size_t>(p)].size()) - 1);
                const LinearProgram lp = assemble_lp(ctx, ix, cand, branches,
                                                     /*chain_parallel=*/true, new_var, sub.interval);
                const LpResult res =
                    canonical_solve(lp, secondary_objective(ctx, ix, cand), rep.lp_solves);
                if (!lp_ok(res)) continue;
                BeamNode child;
                child.state = apply_solution(ix, cand, res.x);
                child.primary = primary_value(child.state);
                child.key = serialize_state(child.state);
                ++rep.nodes_explored;
                if (child.primary < best_partial.primary - 1e-12 ||
                    (std::abs(child.primary - best_partial.primary) <= 1e-12 &&
                     child.key < best_partial.key)) {
                    best_partial = child;
                }
                children.push_back(std::move(child));
            }
        }
        if (children.empty()) {
            std::string msg = "frontier exhausted at generation " + std::to_string(gen) +
                              "; best partial covers " + std::to_string(-best_partial.primary);
            return finish(ctx, best_partial.state, rep, false, std::move(msg), t0);
        }
        std::sort(children.begin(), children.end(), [](const BeamNode& a, const BeamNode& b) {
            if (a.primary != b.primary) return a.primary < b.primary;
            return a.key < b.key;
        });
        children.erase(std::unique(children.begin(), children.end(),
                                   [](const BeamNode& a, const BeamNode& b) {
                                       return a.key == b.key;
                                   }),
                       children.end());
        for (const BeamNode& child : children) {
            if (next_ply(ctx, child.state) < 0) {
                OffsetState winner = child.state;
                std::string msg;
                const bool complete = run_to_valid(ctx, winner, rep, msg);
                return finish(ctx, std::move(winner), rep, complete, std::move(msg), t0);
            }
        }
        if (static_cast<int>(children.size()) > beam_width) {
            children.resize(static_cast<size_t>(beam_width));
        }
        frontier = std::move(children);
    }
    return finish(ctx, best_partial.state, rep, false,
                  "generation cap " + std::to_string(cap) + " reached", t0);
}

std::vector<Violation> validate(const Design& design, const Bundle& bundle,
                                const std::vector<StayOutZone>& zones,
                                const ManufacturingConfig& config) {
    config.validate();
    BundleContext ctx(bundle, zones, config);
    return validate_state(ctx, state_from_design(ctx, design));
}

LayupResult partition_layup(const std::vector<Ply>& layup, const std::vector<StayOutZone>& zones,
                            const ManufacturingConfig& config, int beam_width,
                            bool sort_by_orientation) {
    config.validate();
    if (layup.empty()) throw std::invalid_argument("partition_layup: empty layup");
    const int M = static_cast<int>(layup.size());
    const int N = resolve_max_overlaps(config, M);
    const int m = bundle_size(M, N, config.base_overlaps);
    const std::vector<Bundle> bundles = make_bundles(layup, m, sort_by_orientation);

    LayupResult out;
    out.complete = true;
    for (size_t b = 0; b < bundles.size(); ++b) {
        PartitionOutcome res = beam_width <= 1
                                   ? greedy_partition(bundles[b], zones, config)
                                   : beam_partition(bundles[b], zones, config, beam_width);
        std::vector<std::string> ids;
        for (const Ply& ply : bundles[b].plies) ids.push_back(ply.id());
        out.bundle_ids.push_back(std::move(ids));
        out.reports.push_back(res.report);
        for (auto& [id, offsets] : res.design.seams) {
            out.design.seams[id] = std::move(offsets);
        }
        if (!res.complete) {
            out.complete = false;
            if (!out.message.empty()) out.message += "; ";
            out.message += "bundle " + std::to_string(b) + ": " + res.message;
        }
    }
    out.design.recompute_objective();
    return out;
}

}  // namespace plypart
