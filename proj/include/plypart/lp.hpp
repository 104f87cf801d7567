#pragma once

#include <limits>
#include <vector>

namespace plypart {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

enum class Rel { Le, Ge, Eq };

struct LpRow {
    std::vector<double> coeffs;  // length num_vars
    Rel rel = Rel::Le;
    double rhs = 0.0;
};

// minimize objective . x  subject to rows and per-variable bounds
// lower[i] <= x[i] <= upper[i].  Lower bounds must be finite; an upper bound
// of +infinity leaves the variable unbounded above.
struct LinearProgram {
    int num_vars = 0;
    std::vector<double> objective;
    std::vector<LpRow> rows;
    std::vector<double> lower;
    std::vector<double> upper;

    void set_bounds_default() {
        lower.assign(static_cast<size_t>(num_vars), 0.0);
        upper.assign(static_cast<size_t>(num_vars), std::numeric_limits<double>::infinity());
    }
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
    // Largest constraint/bound violation of the returned point; solutions are
    // checked against the original program after the solve.
    double max_violation = 0.0;
};

// Dense two-phase simplex with Bland's anti-cycling pivot rule.  Equality
// rows are handled as a pair of opposing inequalities.  Deterministic: the
// same program always produces the same vertex.
LpResult solve(const LinearProgram& lp);

}  // namespace plypart
