#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "plypart/geometry.hpp"
#include "plypart/lp.hpp"
#include "plypart/model.hpp"

namespace plypart {

// Ordered group of plies whose seams are optimized together.  Overlap
// stacking constraints never cross bundle boundaries.
struct Bundle {
    std::vector<Ply> plies;
};

// Worst-case bundle size keeping at most `max_overlaps` mutually intersecting
// overlaps when every crossing already stacks `base_overlaps` of them:
// ceil(ply_count * base_overlaps / max_overlaps).
int bundle_size(int ply_count, int max_overlaps, int base_overlaps);

// Effective overlap cap N from the config: explicit max_overlaps wins,
// otherwise floor(tolerance * ply_count); clamped to [1, ply_count].
// Defaults to ply_count (tolerance 100%) when neither is set.
int resolve_max_overlaps(const ManufacturingConfig& config, int ply_count);

// Splits the layup into consecutive groups of m plies.  With
// sort_by_orientation, plies are grouped by fiber angle first so most bundles
// hold a single orientation; when orientations must share a bundle the group
// order is chosen to pair orientations as close to perpendicular as possible.
// Without sorting, stack order is kept.
std::vector<Bundle> make_bundles(const std::vector<Ply>& layup, int m,
                                 bool sort_by_orientation);

// Seam offsets per ply of a bundle, aligned with Bundle::plies; entry 0 of
// every started ply is the boundary seam at offset 0.
using OffsetState = std::vector<std::vector<double>>;

// Prohibited offset intervals on a ply from the stay-out zones: each zone's
// d_perp projection dilated by overlap_width/2, merged, clipped to
// [0, ply_width].  The intervals are open at their endpoints: a seam whose
// strip just touches a zone is acceptable.
std::vector<Interval> stayout_intervals(const Ply& ply,
                                        const std::vector<StayOutZone>& zones,
                                        const ManufacturingConfig& config);

// Keep-away band around a classified vertex.
struct VertexBand {
    int vertex = 0;    // polygon vertex index
    int kind = 0;      // 0 = small-piece (convex), 1 = flimsy (reflex)
    double offset = 0.0;    // vertex position in seam-offset coordinates
    double min_dist = 0.0;  // small_min or flimsy_min
};

// Immutable per-bundle caches: stay-out intervals, vertex bands, parallelism
// relations between plies and the per-ply line constants.
class BundleContext {
public:
    BundleContext(Bundle bundle, std::vector<StayOutZone> zones, ManufacturingConfig config);

    const Bundle& bundle() const { return bundle_; }
    const ManufacturingConfig& config() const { return config_; }
    const std::vector<StayOutZone>& zones() const { return zones_; }
    int num_plies() const { return static_cast<int>(bundle_.plies.size()); }
    const Ply& ply(int p) const { return bundle_.plies[static_cast<size_t>(p)]; }

    const std::vector<Interval>& stayout(int p) const { return stayout_[static_cast<size_t>(p)]; }
    const std::vector<VertexBand>& vertex_bands(int p) const { return bands_[static_cast<size_t>(p)]; }

    bool parallel(int p, int q) const { return group_[static_cast<size_t>(p)] == group_[static_cast<size_t>(q)]; }
    int orientation_group(int p) const { return group_[static_cast<size_t>(p)]; }
    int num_groups() const { return num_groups_; }

    // Position of a seam at offset x on ply q expressed on ply p's transverse
    // axis (valid for parallel plies): shift(p, q) + align(p, q) * x.
    double parallel_shift(int p, int q) const;
    double parallel_align(int p, int q) const;

    // Constant term of the seam line: c = c0(ply) - offset.
    double c0(int p) const { return -bundle_.plies[static_cast<size_t>(p)].proj0(); }

private:
    Bundle bundle_;
    std::vector<StayOutZone> zones_;
    ManufacturingConfig config_;
    std::vector<std::vector<Interval>> stayout_;
    std::vector<std::vector<VertexBand>> bands_;
    std::vector<int> group_;
    int num_groups_ = 0;
};

// Maps interior seams (ply, index >= 1) to LP variable ids in a fixed,
// deterministic order (ply-major, then seam index).
struct SeamIndexer {
    explicit SeamIndexer(const OffsetState& state);

    int var(int ply, int index) const;  // -1 for the boundary seam (index 0)
    int num_vars() const { return static_cast<int>(seams.size()); }

    std::vector<std::pair<int, int>> seams;  // var id -> (ply, index)
    std::vector<std::vector<int>> var_of;    // [ply][index] -> var id or -1
};

// One resolved side for every disjunctive constraint, derived from a concrete
// offset state.  Positive sign means "right of"/"above"; for triples it is the
// sign of the Eq-style signed distance expression.
struct BranchAssignment {
    // (plyA, idxA, plyB, idxB) with (plyA, idxA) < (plyB, idxB):
    // +1 => seam B lies to the right of seam A on A's axis.
    std::map<std::tuple<int, int, int, int>, int> parallel;
    // (ply, idx, interval index): -1 => seam below the interval, +1 => above.
    std::map<std::tuple<int, int, int>, int> stayout;
    // (ply, idx, band index): -1 => seam below the vertex, +1 => above.
    std::map<std::tuple<int, int, int>, int> vertex;
    // (seam a, seam b, seam c, combination 0..2) with seams encoded as
    // ply * kSeamEncode + index, a < b < c: sign of the distance expression.
    std::map<std::tuple<int, int, int, int>, int> triple;

    static constexpr int kSeamEncode = 4096;
};

// Derives the branch of every active disjunctive constraint at `state`
// (ties default to the positive side; parallel order ties fall back to
// (ply, index) order so the assignment is always a total order).
BranchAssignment derive_branches(const BundleContext& ctx, const OffsetState& state);

// --- Row generators -------------------------------------------------------
// All rows are expressed over the SeamIndexer's variables.  Boundary seams
// contribute constants.  `parallel_rows` emits one row per parallel pair
// (the validator's reference form); `parallel_chain_rows` emits the
// equivalent reduced set used inside LPs: under a fixed left-to-right order,
// separation of adjacent seams implies separation of all pairs.

std::vector<LpRow> spool_rows(const BundleContext& ctx, const SeamIndexer& ix,
                              const OffsetState& state);

std::vector<LpRow> parallel_rows(const BundleContext& ctx, const SeamIndexer& ix,
                                 const OffsetState& state, const BranchAssignment& branches);

std::vector<LpRow> parallel_chain_rows(const BundleContext& ctx, const SeamIndexer& ix,
                                       const OffsetState& state);

// Three rows per active seam triple: for each way of singling out one seam,
// the crossing point of the other two must keep a minimum distance from it.
// The bound is exact: support of the crossing parallelogram of the two
// overlap bands in the singled-out normal direction, plus half a band width.
std::vector<LpRow> triple_rows(const BundleContext& ctx, const SeamIndexer& ix,
                               const OffsetState& state, const BranchAssignment& branches);

std::vector<LpRow> stayout_rows(const BundleContext& ctx, const SeamIndexer& ix,
                                const OffsetState& state, const BranchAssignment& branches);

std::vector<LpRow> quality_rows(const BundleContext& ctx, const SeamIndexer& ix,
                                const OffsetState& state, const BranchAssignment& branches);

// Largest violation of the rows at the given assignment (0 when satisfied).
double max_row_violation(const std::vector<LpRow>& rows, const std::vector<double>& x);

// Candidate placement region for the next seam on `ply`: the reachable window
// after the current last seam, minus the open exclusion bands from stay-outs,
// vertex keep-aways and existing parallel seams.  Ordered farthest-first;
// `probe` (the interval's upper end) is the representative point used to fix
// branch signs.
struct Subspace {
    Interval interval;
    double probe = 0.0;
};

std::vector<Subspace> enumerate_subspaces(const BundleContext& ctx, const OffsetState& state,
                                          int ply);

}  // namespace plypart
