#pragma once

#include <vector>

namespace steiner {

enum class RowSense { le, eq, ge };

/// Dense minimization problem over nonnegative variables. Upper bounds are
/// expressed as ordinary rows by the caller.
struct LpProblem {
    int num_vars = 0;
    std::vector<double> objective;
    struct Row {
        std::vector<double> coeffs;  // length num_vars
        RowSense sense = RowSense::le;
        double rhs = 0.0;
    };
    std::vector<Row> rows;
};

struct LpResult {
    enum class Status { optimal, infeasible };
    Status status = Status::optimal;
    std::vector<double> x;
    double objective = 0.0;
};

/// Two-phase primal simplex on a dense tableau. Dantzig pricing with a
/// Bland's-rule fallback against cycling; feasibility tolerance 1e-7,
/// reduced-cost tolerance 1e-9.
LpResult lp_minimize(const LpProblem& problem);

}  // namespace steiner
