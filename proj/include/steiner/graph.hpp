#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace steiner {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCostEps = 1e-9;

struct Edge {
    int u = -1;
    int v = -1;
    double cost = 0.0;
};

/// Undirected STP instance: graph with nonnegative edge costs and a
/// distinguished terminal set. Parallel edges are collapsed to minimum cost
/// at construction; self-loops and disconnected graphs are rejected.
class Instance {
public:
    Instance(int num_nodes, std::vector<Edge> edges, std::vector<int> terminals,
             std::string name = {});

    int num_nodes() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& terminals() const { return terminals_; }
    int num_terminals() const { return static_cast<int>(terminals_.size()); }
    bool is_terminal(int v) const { return is_terminal_[v]; }
    /// Index of node v within terminals(), or -1.
    int terminal_index(int v) const { return terminal_index_[v]; }
    const std::string& name() const { return name_; }

    /// (neighbor, edge index) pairs.
    const std::vector<std::pair<int, int>>& neighbors(int v) const { return adj_[v]; }

    double density() const;

    /// Same graph, different terminal set (used when contracted nonterminals
    /// get promoted to terminals).
    Instance with_terminals(std::vector<int> terminals) const;

private:
    int n_;
    std::vector<Edge> edges_;
    std::vector<int> terminals_;
    std::vector<char> is_terminal_;
    std::vector<int> terminal_index_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
    std::string name_;
};

enum class DistMode { apsp, sssp };
enum class SpPolicy { forbid, prefer };

/// Shortest-path tables with per-pair validity: a pair is valid iff a
/// shortest path free of interior terminals exists and is recorded.
///   forbid: the search never relaxes through a terminal, so every reached
///           pair is valid (possibly via a detour).
///   prefer: ordinary shortest paths with a tie-break that maximizes the
///           number of interior terminals; pairs whose recorded path has an
///           interior terminal are marked invalid.
/// Under sssp mode only rows with a terminal source exist.
class DistanceOracle {
public:
    DistMode mode() const { return mode_; }
    SpPolicy policy() const { return policy_; }

    bool has(int u, int v) const { return row_of_[u] >= 0 || row_of_[v] >= 0; }
    double dist(int u, int v) const;
    bool valid(int u, int v) const;
    /// Node sequence u..v of the recorded path. Requires has(u,v) and finite dist.
    std::vector<int> path(int u, int v) const;

private:
    friend DistanceOracle shortest_paths(const Instance&, DistMode, SpPolicy);
    DistMode mode_;
    SpPolicy policy_;
    std::vector<int> row_of_;               // node -> row index or -1
    std::vector<int> source_of_row_;
    std::vector<std::vector<double>> dist_;
    std::vector<std::vector<int>> pred_;
    std::vector<std::vector<char>> valid_;
};

DistanceOracle shortest_paths(const Instance& inst, DistMode mode, SpPolicy policy);

/// Rule of thumb for k=3: sssp unless the graph is dense.
DistMode auto_dist_mode(const Instance& inst);

struct VoronoiPartition {
    std::vector<int> owner;        // node -> owning terminal (node id)
    std::vector<double> dist;      // node -> distance to owner
    std::vector<int> pred_edge;    // edge toward owner, -1 at terminals
};

/// Multi-source shortest paths from all terminals; ties go to the
/// lowest-index terminal so the partition is deterministic.
VoronoiPartition voronoi_regions(const Instance& inst);

struct WeightedGraph {
    int n = 0;
    std::vector<Edge> edges;
};

/// Thrown by the long-running solvers when a cooperative deadline passes.
struct TimeoutError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Tree {
    std::vector<int> edge_indices;  // into the input graph's edge list
    double cost = 0.0;
};

/// Kruskal MST with deterministic (cost, edge index) tie-break.
/// Throws if g is disconnected.
Tree mst(const WeightedGraph& g);
std::optional<Tree> try_mst(const WeightedGraph& g);

/// Complete graph on U with closure costs; indices into U.
/// Throws if a required pair is missing from the oracle.
WeightedGraph metric_closure(const DistanceOracle& oracle, const std::vector<int>& U);

struct MaxFlowResult {
    double value = 0.0;
    std::vector<char> sink_side;  // per node; complement of source side
};

class FlowNetwork {
public:
    explicit FlowNetwork(int n) : n_(n) {}
    int num_nodes() const { return n_; }
    void add_arc(int from, int to, double capacity);
    /// Dinic max-flow; sink_side = nodes unreachable from source in the residual.
    MaxFlowResult max_flow(int source, int sink);

private:
    struct Arc { int to; double cap; int rev; };
    int n_;
    std::vector<std::vector<Arc>> arcs_{static_cast<size_t>(n_)};
    bool bfs_levels(int s, int t, std::vector<int>& level);
    double dfs_push(int v, int t, double pushed, std::vector<int>& level, std::vector<int>& it);
};

/// Disjoint-set forest.
class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n), rank_(n, 0) {
        for (int i = 0; i < n; ++i) parent_[i] = i;
    }
    int find(int x) {
        while (parent_[x] != x) { parent_[x] = parent_[parent_[x]]; x = parent_[x]; }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a); b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }

private:
    std::vector<int> parent_;
    std::vector<int> rank_;
};

}  // namespace steiner
