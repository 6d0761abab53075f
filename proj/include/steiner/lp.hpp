#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "steiner/components.hpp"
#include "steiner/simplex.hpp"
#include "steiner/two_approx.hpp"

namespace steiner {

/// Pooled cutting plane, stored in terms of terminal sets so it survives
/// terminal merging during rounding.
struct SerCut {
    enum class Kind { coverage, subtour, clique };
    Kind kind = Kind::subtour;
    int terminal = -1;                               // coverage
    std::vector<int> terminals;                      // subtour: R', sorted
    std::vector<std::vector<int>> clique_members;    // clique: each member's R_C
};

/// The hypergraph relaxation over one component list: objective sum d(C) x_C,
/// the tree-counting equality sum (|R_C|-1) x_C = |R|-1, box 0 <= x <= 1, and
/// whatever cuts have been pooled so far.
class SerModel {
public:
    SerModel(std::vector<FullComponent> comps, std::vector<int> terminals);

    const std::vector<FullComponent>& components() const { return comps_; }
    const std::vector<int>& terminals() const { return terminals_; }
    const std::vector<SerCut>& cuts() const { return cuts_; }
    std::optional<double> objective_bound;

    /// Adds the cut unless an identical one is pooled; returns whether added.
    bool add_cut(SerCut cut);

    LpProblem build_lp() const;

private:
    std::vector<FullComponent> comps_;
    std::vector<int> terminals_;
    std::vector<SerCut> cuts_;
    std::vector<std::string> signatures_;
};

struct LpSolution {
    std::vector<double> x;
    double objective = 0.0;
    bool infeasible = false;
    std::vector<int> support;          // indices with x > tau
    std::vector<double> coverage;      // y_r per position in model.terminals()
};

constexpr double kLpTau = 1e-7;

/// Solves the model's current pool to optimality.
LpSolution lp_solve(const SerModel& model);

struct SerOptions {
    bool presep_initial = true;  // seed all coverage rows; otherwise on demand
    bool consep = false;
    bool stronger = false;
    bool bound = false;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// One separation round. Requires y_r >= 1 for every terminal. consep first
/// checks hypergraph connectivity of the support and emits one subtour cut
/// per part, skipping the flow step for that round; otherwise per-terminal
/// min cuts on the auxiliary star network. stronger additionally searches the
/// support's conflict graph for violated clique cuts.
std::vector<SerCut> separate(const SerModel& model, const LpSolution& sol,
                             const SerOptions& opts, int k);

/// Cutting-plane loop to emptiness. With bound on, an exceeded bound comes
/// back as infeasible = true; without it, infeasibility throws.
LpSolution solve_ser(const Instance& inst, const ComponentSet& set, const SerOptions& opts);
LpSolution solve_ser(SerModel& model, const SerOptions& opts, int k);

struct PruneOutcome {
    std::vector<FullComponent> committed;
    std::vector<int> remaining_terminals;
    LpSolution residual;
};

/// Peels support components with x ~ 1 that share exactly one terminal with
/// the rest of the support, in component-index order; each peel stays
/// feasible for the reduced terminal set.
PruneOutcome prune_integral_leaves(const SerModel& model, const LpSolution& sol);

struct RoundOptions {
    SerOptions ser;
    bool deterministic = false;  // pick max x instead of sampling
    bool prune = true;           // peel integral leaves before each pick
    std::uint64_t seed = 0;
    int k = 3;
};

/// Sample-and-contract rounding: solve, prune integral leaves, choose one
/// support component, merge its terminals, re-solve; finally expand all
/// chosen components and prune to a tree.
SteinerTree round_iterative(const Instance& inst, const ComponentSet& set,
                            const RoundOptions& opts);

}  // namespace steiner
