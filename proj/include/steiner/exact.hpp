#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "steiner/graph.hpp"

namespace steiner {

struct DwResult {
    double cost = 0.0;
    std::vector<int> edge_indices;  // union of expanded paths, sorted unique
};

/// Dynamic program over (terminal subset, root node) states. Costs obey
///   S({t}, v) = d(t, v)
///   S(X, v)   = min_u d(u, v) + min over splits of X at u
/// and the optimum for a terminal set R' is S(R' minus its lowest terminal,
/// that terminal). States are filled in increasing subset size; backtracking
/// keeps the lowest-index witness so trees are deterministic.
class DreyfusWagner {
public:
    /// Builds all states with subset size < limit. The oracle must cover all
    /// node pairs. Guards: limit >= 6 with more than 24 terminals needs
    /// force=true; the projected table size must stay under max_table_bytes.
    DreyfusWagner(const Instance& inst, const DistanceOracle& oracle, int limit,
                  bool force = false, std::size_t max_table_bytes = 1ull << 31);

    int limit() const { return limit_; }

    /// Optimal Steiner tree for a terminal subset of size 2..limit.
    DwResult tree_for(const std::vector<int>& terminal_subset) const;
    double cost_for(const std::vector<int>& terminal_subset) const;

    /// Exact optimum over all terminals of inst.
    static DwResult solve(const Instance& inst, const DistanceOracle& oracle);

private:
    const Instance& inst_;
    const DistanceOracle& oracle_;
    int limit_;
    std::vector<std::uint32_t> masks_;            // popcount < limit, ascending size
    std::unordered_map<std::uint32_t, int> slot_lookup_;  // mask -> index into tables
    std::vector<std::vector<double>> cost_;       // per mask slot, per node
    std::vector<std::vector<int>> via_node_;      // closing node u, -1 = none
    std::vector<std::vector<std::uint32_t>> split_;  // split of the mask at u

    void collect_tree(std::uint32_t mask, int v, std::vector<int>& edges) const;
    void add_path_edges(int u, int v, std::vector<int>& edges) const;
};

}  // namespace steiner
