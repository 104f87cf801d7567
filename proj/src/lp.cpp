#include "plypart/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace plypart {

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kPhase1Eps = 1e-9;
constexpr int kMaxIterations = 200000;

// Dense tableau: rows of length num_cols + 1, last entry is the rhs.
struct Tableau {
    int m = 0;
    int n = 0;  // columns excluding rhs
    std::vector<double> a;
    std::vector<int> basis;

    double& at(int r, int c) { return a[static_cast<size_t>(r) * (n + 1) + c]; }
    double at(int r, int c) const { return a[static_cast<size_t>(r) * (n + 1) + c]; }
    double& rhs(int r) { return at(r, n); }

    void pivot(int pr, int pc) {
        double* prow = &a[static_cast<size_t>(pr) * (n + 1)];
        const double inv = 1.0 / prow[pc];
        for (int c = 0; c <= n; ++c) prow[c] *= inv;
        prow[pc] = 1.0;
        for (int r = 0; r < m; ++r) {
            if (r == pr) continue;
            double* row = &a[static_cast<size_t>(r) * (n + 1)];
            const double f = row[pc];
            if (f == 0.0) continue;
            for (int c = 0; c <= n; ++c) row[c] -= f * prow[c];
            row[pc] = 0.0;
        }
        basis[pr] = pc;
    }
};

// Runs simplex iterations on the tableau for the given cost vector.
// `allowed[c]` marks columns permitted to enter the basis.  Returns the
// status; the tableau is left at the final basis.
LpStatus run_simplex(Tableau& t, const std::vector<double>& cost,
                     const std::vector<char>& allowed, int* iter_budget) {
    std::vector<double> dual(static_cast<size_t>(t.m));
    while (true) {
        if (--(*iter_budget) < 0) return LpStatus::IterationLimit;

        for (int r = 0; r < t.m; ++r) dual[r] = cost[static_cast<size_t>(t.basis[r])];

        // Bland: enter the lowest-index column with negative reduced cost.
        int enter = -1;
        for (int c = 0; c < t.n; ++c) {
            if (!allowed[static_cast<size_t>(c)]) continue;
            double red = cost[static_cast<size_t>(c)];
            for (int r = 0; r < t.m; ++r) {
                const double v = t.at(r, c);
                if (v != 0.0) red -= dual[static_cast<size_t>(r)] * v;
            }
            if (red < -kPivotEps) {
                enter = c;
                break;
            }
        }
        if (enter < 0) return LpStatus::Optimal;

        // Ratio test; ties resolved toward the smallest basis index (Bland).
        int leave = -1;
        double best_ratio = 0.0;
        for (int r = 0; r < t.m; ++r) {
            const double v = t.at(r, enter);
            if (v <= kPivotEps) continue;
            const double ratio = t.rhs(r) / v;
            if (leave < 0 || ratio < best_ratio - 1e-12 ||
                (std::abs(ratio - best_ratio) <= 1e-12 && t.basis[r] < t.basis[leave])) {
                leave = r;
                best_ratio = ratio;
            }
        }
        if (leave < 0) return LpStatus::Unbounded;
        t.pivot(leave, enter);
    }
}

}  // namespace

LpResult solve(const LinearProgram& lp) {
    const int nv = lp.num_vars;
    if (static_cast<int>(lp.objective.size()) != nv ||
        static_cast<int>(lp.lower.size()) != nv ||
        static_cast<int>(lp.upper.size()) != nv) {
        throw std::invalid_argument("solve: inconsistent program dimensions");
    }
    for (const LpRow& row : lp.rows) {
        if (static_cast<int>(row.coeffs.size()) != nv) {
            throw std::invalid_argument("solve: row width != num_vars");
        }
    }
    for (int j = 0; j < nv; ++j) {
        if (!std::isfinite(lp.lower[static_cast<size_t>(j)])) {
            throw std::invalid_argument("solve: lower bounds must be finite");
        }
    }

    // Shift variables to y = x - lower >= 0; finite upper bounds become rows.
    // Equality rows become two opposing inequalities.
    struct NormRow {
        std::vector<double> coeffs;
        bool ge = false;  // after normalization every row reads a.y (<=|>=) b with b >= 0
        double rhs = 0.0;
    };
    std::vector<NormRow> norm;
    auto add_ineq = [&](const std::vector<double>& coeffs, bool ge, double rhs) {
        NormRow r;
        r.coeffs = coeffs;
        r.ge = ge;
        r.rhs = rhs;
        if (r.rhs < 0.0) {
            for (double& v : r.coeffs) v = -v;
            r.rhs = -r.rhs;
            r.ge = !r.ge;
        }
        norm.push_back(std::move(r));
    };

    for (const LpRow& row : lp.rows) {
        double shift = 0.0;
        for (int j = 0; j < nv; ++j) shift += row.coeffs[static_cast<size_t>(j)] * lp.lower[static_cast<size_t>(j)];
        const double b = row.rhs - shift;
        if (row.rel == Rel::Le || row.rel == Rel::Eq) add_ineq(row.coeffs, false, b);
        if (row.rel == Rel::Ge || row.rel == Rel::Eq) add_ineq(row.coeffs, true, b);
    }
    for (int j = 0; j < nv; ++j) {
        const double hi = lp.upper[static_cast<size_t>(j)];
        if (std::isfinite(hi)) {
            std::vector<double> coeffs(static_cast<size_t>(nv), 0.0);
            coeffs[static_cast<size_t>(j)] = 1.0;
            add_ineq(coeffs, false, hi - lp.lower[static_cast<size_t>(j)]);
        }
    }

    const int m = static_cast<int>(norm.size());
    // Columns: structural | slack/surplus (one per row) | artificial (ge rows).
    int n_art = 0;
    for (const NormRow& r : norm) {
        if (r.ge) ++n_art;
    }
    const int n_cols = nv + m + n_art;

    Tableau t;
    t.m = m;
    t.n = n_cols;
    t.a.assign(static_cast<size_t>(m) * (n_cols + 1), 0.0);
    t.basis.assign(static_cast<size_t>(m), -1);

    int art = nv + m;
    for (int r = 0; r < m; ++r) {
        const NormRow& row = norm[static_cast<size_t>(r)];
        for (int j = 0; j < nv; ++j) t.at(r, j) = row.coeffs[static_cast<size_t>(j)];
        t.rhs(r) = row.rhs;
        if (row.ge) {
            t.at(r, nv + r) = -1.0;  // surplus
            t.at(r, art) = 1.0;
            t.basis[r] = art;
            ++art;
        } else {
            t.at(r, nv + r) = 1.0;  // slack starts basic
            t.basis[r] = nv + r;
        }
    }

    LpResult result;
    int iter_budget = kMaxIterations;

    if (n_art > 0) {
        std::vector<double> cost1(static_cast<size_t>(n_cols), 0.0);
        for (int c = nv + m; c < n_cols; ++c) cost1[static_cast<size_t>(c)] = 1.0;
        std::vector<char> allowed(static_cast<size_t>(n_cols), 1);
        const LpStatus s1 = run_simplex(t, cost1, allowed, &iter_budget);
        if (s1 == LpStatus::IterationLimit) {
            result.status = s1;
            return result;
        }
        double phase1 = 0.0;
        for (int r = 0; r < m; ++r) {
            if (t.basis[r] >= nv + m) phase1 += t.rhs(r);
        }
        if (phase1 > kPhase1Eps) {
            result.status = LpStatus::Infeasible;
            return result;
        }
        // Pivot remaining (degenerate) artificials out wherever the row has a
        // usable structural or slack coefficient; rows left without one are
        // redundant and are blanked so they cannot act again.
        for (int r = 0; r < m; ++r) {
            if (t.basis[r] < nv + m) continue;
            int col = -1;
            for (int c = 0; c < nv + m; ++c) {
                if (std::abs(t.at(r, c)) > 1e-7) {
                    col = c;
                    break;
                }
            }
            if (col >= 0) {
                t.pivot(r, col);
            } else {
                for (int c = 0; c <= t.n; ++c) t.at(r, c) = 0.0;
                t.at(r, t.basis[r]) = 1.0;  // keep the basis marker consistent
            }
        }
    }

    std::vector<double> cost2(static_cast<size_t>(n_cols), 0.0);
    for (int j = 0; j < nv; ++j) cost2[static_cast<size_t>(j)] = lp.objective[static_cast<size_t>(j)];
    std::vector<char> allowed2(static_cast<size_t>(n_cols), 1);
    for (int c = nv + m; c < n_cols; ++c) allowed2[static_cast<size_t>(c)] = 0;
    const LpStatus s2 = run_simplex(t, cost2, allowed2, &iter_budget);
    if (s2 != LpStatus::Optimal) {
        result.status = s2;
        return result;
    }

    result.status = LpStatus::Optimal;
    result.x.assign(static_cast<size_t>(nv), 0.0);
    for (int r = 0; r < m; ++r) {
        if (t.basis[r] < nv) result.x[static_cast<size_t>(t.basis[r])] = t.rhs(r);
    }
    for (int j = 0; j < nv; ++j) result.x[static_cast<size_t>(j)] += lp.lower[static_cast<size_t>(j)];

    result.objective = 0.0;
    for (int j = 0; j < nv; ++j) result.objective += lp.objective[static_cast<size_t>(j)] * result.x[static_cast<size_t>(j)];

    // Sanity-check the returned vertex against the original program.
    double viol = 0.0;
    for (int j = 0; j < nv; ++j) {
        viol = std::max(viol, lp.lower[static_cast<size_t>(j)] - result.x[static_cast<size_t>(j)]);
        if (std::isfinite(lp.upper[static_cast<size_t>(j)])) {
            viol = std::max(viol, result.x[static_cast<size_t>(j)] - lp.upper[static_cast<size_t>(j)]);
        }
    }
    for (const LpRow& row : lp.rows) {
        double lhs = 0.0;
        for (int j = 0; j < nv; ++j) lhs += row.coeffs[static_cast<size_t>(j)] * result.x[static_cast<size_t>(j)];
        if (row.rel == Rel::Le) viol = std::max(viol, lhs - row.rhs);
        else if (row.rel == Rel::Ge) viol = std::max(viol, row.rhs - lhs);
        else viol = std::max(viol, std::abs(lhs - row.rhs));
    }
    result.max_violation = viol;
    return result;
}

}  // namespace plypart
