#include "steiner/simplex.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace steiner {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;

// tableau rows: m constraint rows plus one objective row, rhs in the last
// column; basis_[i] is the variable owning row i
class Tableau {
public:
    Tableau(int rows, int cols) : m_(rows), n_(cols), t_(static_cast<std::size_t>(rows + 1) * (cols + 1), 0.0), basis_(rows, -1) {}

    double& at(int r, int c) { return t_[static_cast<std::size_t>(r) * (n_ + 1) + c]; }
    double& rhs(int r) { return at(r, n_); }
    double& obj(int c) { return at(m_, c); }
    int rows() const { return m_; }
    int cols() const { return n_; }
    std::vector<int>& basis() { return basis_; }

    void pivot(int pr, int pc) {
        double p = at(pr, pc);
        for (int c = 0; c <= n_; ++c) at(pr, c) /= p;
        for (int r = 0; r <= m_; ++r) {
            if (r == pr) continue;
            double f = at(r, pc);
            if (std::abs(f) < kPivotTol) continue;
            for (int c = 0; c <= n_; ++c) at(r, c) -= f * at(pr, c);
        }
        basis_[pr] = pc;
    }

    // returns false on optimality, throws on iteration exhaustion
    bool iterate(int allowed_cols, bool bland) {
        int pc = -1;
        double best = -kPivotTol;
        for (int c = 0; c < allowed_cols; ++c) {
            double rc = obj(c);
            if (rc < (bland ? -kPivotTol : best)) {
                pc = c;
                if (bland) break;
                best = rc;
            }
        }
        if (pc < 0) return false;
        int pr = -1;
        double best_ratio = 0.0;
        for (int r = 0; r < m_; ++r) {
            double a = at(r, pc);
            if (a <= kPivotTol) continue;
            double ratio = rhs(r) / a;
            if (pr < 0 || ratio < best_ratio - kPivotTol ||
                (ratio < best_ratio + kPivotTol && basis_[r] < basis_[pr])) {
                pr = r;
                best_ratio = ratio;
            }
        }
        if (pr < 0) throw std::runtime_error("simplex: unbounded direction");
        pivot(pr, pc);
        return true;
    }

private:
    int m_, n_;
    std::vector<double> t_;
    std::vector<int> basis_;
};

}  // namespace

LpResult lp_minimize(const LpProblem& problem) {
    const int n = problem.num_vars;
    const int m = static_cast<int>(problem.rows.size());
    if (n <= 0) throw std::invalid_argument("simplex: no variables");
    if (static_cast<int>(problem.objective.size()) != n)
        throw std::invalid_argument("simplex: objective size mismatch");

    // normalize to rhs >= 0, then append slack/surplus and artificial columns
    std::vector<LpProblem::Row> rows = problem.rows;
    for (auto& row : rows) {
        if (static_cast<int>(row.coeffs.size()) != n)
            throw std::invalid_argument("simplex: row size mismatch");
        if (row.rhs < 0) {
            for (double& c : row.coeffs) c = -c;
            row.rhs = -row.rhs;
            if (row.sense == RowSense::le)
                row.sense = RowSense::ge;
            else if (row.sense == RowSense::ge)
                row.sense = RowSense::le;
        }
    }
    int slacks = 0, artificials = 0;
    for (const auto& row : rows) {
        if (row.sense != RowSense::eq) ++slacks;
        if (row.sense != RowSense::le) ++artificials;
    }
    const int total = n + slacks + artificials;
    Tableau t(m, total);
    int slack_at = n, art_at = n + slacks;
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < n; ++c) t.at(r, c) = rows[r].coeffs[c];
        t.rhs(r) = rows[r].rhs;
        switch (rows[r].sense) {
            case RowSense::le:
                t.at(r, slack_at) = 1.0;
                t.basis()[r] = slack_at++;
                break;
            case RowSense::ge:
                t.at(r, slack_at++) = -1.0;
                t.at(r, art_at) = 1.0;
                t.basis()[r] = art_at++;
                break;
            case RowSense::eq:
                t.at(r, art_at) = 1.0;
                t.basis()[r] = art_at++;
                break;
        }
    }

    auto run = [&](int allowed) {
        const long cap = 2000L + 200L * (m + total);
        long it = 0;
        while (t.iterate(allowed, /*bland=*/it > cap / 2))
            if (++it > cap) throw std::runtime_error("simplex: iteration limit");
    };

    if (artificials > 0) {
        // phase 1: price out the artificial basis, minimize its sum
        for (int c = n + slacks; c < total; ++c) t.obj(c) = 1.0;
        for (int r = 0; r < m; ++r)
            if (t.basis()[r] >= n + slacks)
                for (int c = 0; c <= total; ++c) t.at(m, c) -= t.at(r, c);
        run(total);
        // the objective row's rhs carries the negated phase-1 value
        if (-t.rhs(m) > kFeasTol) {
            LpResult res;
            res.status = LpResult::Status::infeasible;
            return res;
        }
        // drive leftover artificials out of the basis where possible
        for (int r = 0; r < m; ++r) {
            if (t.basis()[r] < n + slacks) continue;
            for (int c = 0; c < n + slacks; ++c)
                if (std::abs(t.at(r, c)) > kFeasTol) {
                    t.pivot(r, c);
                    break;
                }
        }
    }

    // phase 2: rebuild reduced costs for the real objective
    for (int c = 0; c <= total; ++c) t.obj(c) = 0.0;
    for (int c = 0; c < n; ++c) t.obj(c) = problem.objective[c];
    for (int r = 0; r < m; ++r) {
        int b = t.basis()[r];
        if (b < n && std::abs(problem.objective[b]) > 0) {
            double f = problem.objective[b];
            for (int c = 0; c <= total; ++c) t.at(m, c) -= f * t.at(r, c);
        }
    }
    run(n + slacks);  // artificial columns stay out

    LpResult res;
    res.x.assign(n, 0.0);
    for (int r = 0; r < m; ++r)
        if (t.basis()[r] < n) res.x[t.basis()[r]] = t.rhs(r);
    res.objective = 0.0;
    for (int c = 0; c < n; ++c) res.objective += problem.objective[c] * res.x[c];
    return res;
}

}  // namespace steiner
