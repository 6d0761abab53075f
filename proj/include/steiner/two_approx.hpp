#pragma once

#include <vector>

#include "steiner/graph.hpp"

namespace steiner {

/// Tree inside the instance graph spanning all terminals, every leaf a
/// terminal.
struct SteinerTree {
    std::vector<int> edge_indices;  // into Instance::edges()
    std::vector<int> nodes;         // sorted spanned node set
    double cost = 0.0;
};

/// Checks the SteinerTree invariants against inst; returns a diagnostic or
/// empty string if the tree is valid.
std::string check_steiner_tree(const Instance& inst, const SteinerTree& tree);

/// MST over the edge subset, then repeated removal of nonterminal leaves.
/// Throws if the subset does not connect the terminals.
SteinerTree prune_to_steiner_tree(const Instance& inst, const std::vector<int>& edge_indices);

/// Path-growth heuristic: starting from the lowest-index terminal, repeatedly
/// attach the cheapest shortest path from the current tree to an unreached
/// terminal (multi-source search per round). 2-approximation.
SteinerTree tm(const Instance& inst);

/// Terminal-closure heuristic: MST of the complete terminal distance graph,
/// expanded back to graph paths, then MST + prune. 2-approximation.
/// The oracle must cover all terminal pairs (sssp rows suffice).
SteinerTree kmb(const Instance& inst, const DistanceOracle& oracle);

/// Closure variant that only inspects region boundary edges: for each edge
/// (u,v) crossing two regions, candidate terminal edge (owner(u), owner(v))
/// of cost d(owner(u),u) + c(u,v) + d(v,owner(v)). Same contract as kmb but
/// near-linear. 2-approximation.
SteinerTree mehlhorn(const Instance& inst);

/// Approximation ratio bound for trees assembled from components spanning at
/// most k terminals: 1 + 2^r / ((r-1) 2^r + k), r = floor(log2 k).
double rho_k(int k);

}  // namespace steiner
