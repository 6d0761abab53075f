#pragma once

// Shared helpers for the test suite. The brute-force routines here are kept
// deliberately independent of the library's algorithms: they enumerate.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "steiner/graph.hpp"

namespace testutil {

// Random connected instance: spanning-tree backbone plus extra edges.
// Costs are small integers so optima are exactly representable.
inline steiner::Instance random_instance(std::mt19937& rng, int n, int extra_edges,
                                         int num_terminals, int max_cost = 10) {
    std::uniform_int_distribution<int> cost_dist(1, max_cost);
    std::vector<steiner::Edge> edges;
    std::map<std::pair<int, int>, bool> used;
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        int u = pick(rng);
        edges.push_back({u, v, static_cast<double>(cost_dist(rng))});
        used[std::minmax(u, v)] = true;
    }
    std::uniform_int_distribution<int> node(0, n - 1);
    for (int i = 0; i < extra_edges; ++i) {
        int u = node(rng), v = node(rng);
        if (u == v || used.count(std::minmax(u, v))) continue;
        used[std::minmax(u, v)] = true;
        edges.push_back({u, v, static_cast<double>(cost_dist(rng))});
    }
    std::vector<int> nodes(n);
    for (int v = 0; v < n; ++v) nodes[v] = v;
    std::shuffle(nodes.begin(), nodes.end(), rng);
    std::vector<int> terminals(nodes.begin(), nodes.begin() + num_terminals);
    return steiner::Instance(n, std::move(edges), std::move(terminals));
}

// MST cost of the subgraph induced by `keep`, or +inf if it does not connect.
inline double induced_mst_cost(const steiner::Instance& inst, const std::vector<char>& keep) {
    std::vector<int> id(inst.num_nodes(), -1);
    int m = 0;
    for (int v = 0; v < inst.num_nodes(); ++v)
        if (keep[v]) id[v] = m++;
    if (m == 0) return steiner::kInf;
    steiner::WeightedGraph g;
    g.n = m;
    for (const auto& e : inst.edges())
        if (keep[e.u] && keep[e.v]) g.edges.push_back({id[e.u], id[e.v], e.cost});
    auto t = steiner::try_mst(g);
    return t ? t->cost : steiner::kInf;
}

// Exact Steiner minimum by enumerating every nonterminal subset S and taking
// MST(G[R + S]). Exponential; for instances with <= ~16 nonterminals.
inline double brute_force_steiner(const steiner::Instance& inst) {
    std::vector<int> nonterminals;
    for (int v = 0; v < inst.num_nodes(); ++v)
        if (!inst.is_terminal(v)) nonterminals.push_back(v);
    const int k = static_cast<int>(nonterminals.size());
    double best = steiner::kInf;
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        std::vector<char> keep(inst.num_nodes(), 0);
        for (int t : inst.terminals()) keep[t] = 1;
        for (int i = 0; i < k; ++i)
            if (mask & (1u << i)) keep[nonterminals[i]] = 1;
        best = std::min(best, induced_mst_cost(inst, keep));
    }
    return best;
}

// Directed min cut by enumerating source-side subsets. For <= ~16 nodes.
struct BruteArc {
    int from, to;
    double cap;
};
inline double brute_force_min_cut(int n, const std::vector<BruteArc>& arcs, int s, int t) {
    double best = steiner::kInf;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (!(mask & (1u << s)) || (mask & (1u << t))) continue;
        double cut = 0;
        for (const auto& a : arcs)
            if ((mask & (1u << a.from)) && !(mask & (1u << a.to))) cut += a.cap;
        best = std::min(best, cut);
    }
    return best;
}

// As random_instance but with generic-position real costs, so minimum trees
// and bottleneck edges are unique.
inline steiner::Instance random_real_instance(std::mt19937& rng, int n, int extra_edges,
                                              int num_terminals) {
    auto base = random_instance(rng, n, extra_edges, num_terminals);
    std::uniform_real_distribution<double> jitter(0.5, 10.0);
    std::vector<steiner::Edge> edges = base.edges();
    for (auto& e : edges) e.cost = jitter(rng);
    return steiner::Instance(n, std::move(edges), base.terminals());
}

}  // namespace testutil
