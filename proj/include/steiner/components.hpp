#pragma once

#include <optional>
#include <string>
#include <vector>

#include "steiner/graph.hpp"

namespace steiner {

/// Candidate building block for k-restricted Steiner trees: a tree in the
/// original graph whose leaves are exactly its terminal set and whose inner
/// nodes are nonterminals (unless flagged). Stored fully expanded; loss and
/// core edges are derived on the expansion, never on closure edges, because
/// shared expansions change both.
struct FullComponent {
    std::vector<int> terminals;     // sorted node ids, 2 <= size <= k
    std::vector<int> edge_indices;  // tree edges, sorted indices into Instance::edges()
    std::vector<int> inner_nodes;   // sorted nonterminal tree nodes
    double cost = 0.0;              // closure tree value, >= expansion edge sum

    std::vector<int> loss_edges;    // forest tying each inner node to a terminal
    double loss_cost = 0.0;

    std::vector<int> core_edges;    // |terminals|-1 edges once selected
    bool inner_terminal = false;    // a terminal ended up as an inner node
};

class ComponentSet {
public:
    ComponentSet(int k, std::string strategy) : k_(k), strategy_(std::move(strategy)) {}

    int k() const { return k_; }
    const std::string& strategy() const { return strategy_; }
    const std::vector<FullComponent>& components() const { return components_; }
    const FullComponent* find(const std::vector<int>& terminals) const;

    /// Keeps at most one component per terminal set (minimum cost, earlier
    /// insertion wins ties).
    void add(FullComponent c);
    void merge(const ComponentSet& other);

    int dropped_inner_terminal() const { return dropped_inner_terminal_; }
    int flagged_inner_terminal() const { return flagged_inner_terminal_; }
    void count_dropped() { ++dropped_inner_terminal_; }

    /// One line per component: terminal ids, cost, edge list.
    std::string dump(const Instance& inst) const;

private:
    int k_;
    std::string strategy_;
    std::vector<FullComponent> components_;
    int dropped_inner_terminal_ = 0;
    int flagged_inner_terminal_ = 0;
};

/// Graph edges of the recorded shortest path between u and v.
std::vector<int> expand_path(const Instance& inst, const DistanceOracle& oracle, int u, int v);

/// Canonical component from a set of graph edges connecting the terminal set:
/// MST of the edge set, nonterminal leaves pruned. Returns nothing when the
/// edges do not connect the terminals or a foreign terminal remains in the
/// tree; a terminal that ends up inner yields a flagged component only when
/// allow_inner_terminal is set, otherwise nothing.
std::optional<FullComponent> canonical_component(const Instance& inst,
                                                 std::vector<int> terminals,
                                                 const std::vector<int>& edge_indices,
                                                 bool allow_inner_terminal = false);

/// Exhaustive generation: for every terminal subset R' (2..k) and nonterminal
/// subset S with |S| <= |R'|-2, evaluate the closure MST over R' + S built
/// from valid oracle pairs; keep the cheapest surviving candidate per R'.
ComponentSet gen_all_naive(const Instance& inst, const DistanceOracle& oracle, int k);

/// Two-phase generation: inner trees MST over nonterminal subsets first, then
/// every terminal of R' attaches to its cheapest inner node. Candidates whose
/// canonical tree turns a terminal inner are kept flagged (they are dominated
/// whenever a proper component exists).
ComponentSet gen_all_smart(const Instance& inst, const DistanceOracle& oracle, int k);

/// Dynamic-programming generation: optimal tree per terminal subset of size
/// <= k, dropped when it is not a full component. Exact minimum k-restricted
/// components.
ComponentSet gen_all_dw(const Instance& inst, int k);

/// Like gen_all_naive but inner candidates restricted to the union of the
/// terminals' regions. Supports a minimum 3-restricted tree for k=3; may be
/// suboptimal for k >= 4.
ComponentSet gen_voronoi(const Instance& inst, const DistanceOracle& oracle,
                         const VoronoiPartition& voronoi, int k);

/// MST of the component with zero-cost edges added between all its terminals;
/// the chosen real edges form the loss forest. Fills loss_edges/loss_cost.
void compute_loss(const Instance& inst, FullComponent& c);

enum class CoreMode { random, loss_complement };

/// Exactly |terminals|-1 edges whose removal separates all terminals:
/// complement of a spanning tree of the component with terminals contracted.
/// Fills core_edges.
void select_core_edges(const Instance& inst, FullComponent& c, CoreMode mode,
                       std::uint64_t seed = 0);

}  // namespace steiner
