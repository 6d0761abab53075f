#include "steiner/two_approx.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

namespace steiner {

std::string check_steiner_tree(const Instance& inst, const SteinerTree& tree) {
    std::set<int> nodes;
    std::map<int, int> degree;
    double cost = 0;
    std::set<int> seen_edges;
    UnionFind uf(inst.num_nodes());
    for (int ei : tree.edge_indices) {
        if (ei < 0 || ei >= static_cast<int>(inst.edges().size())) return "edge index out of range";
        if (!seen_edges.insert(ei).second) return "duplicate edge";
        const Edge& e = inst.edges()[ei];
        if (!uf.unite(e.u, e.v)) return "cycle";
        nodes.insert(e.u);
        nodes.insert(e.v);
        ++degree[e.u];
        ++degree[e.v];
        cost += e.cost;
    }
    if (inst.num_terminals() == 1) nodes.insert(inst.terminals()[0]);
    for (int t : inst.terminals())
        if (!nodes.count(t)) return "terminal not spanned";
    int root = inst.terminals()[0];
    for (int v : nodes)
        if (uf.find(v) != uf.find(root)) return "not connected";
    for (auto [v, deg] : degree)
        if (deg == 1 && !inst.is_terminal(v)) return "nonterminal leaf";
    if (std::abs(cost - tree.cost) > 1e-6 * std::max(1.0, std::abs(cost))) return "cost mismatch";
    std::vector<int> expect(nodes.begin(), nodes.end());
    if (expect != tree.nodes) return "node set mismatch";
    return {};
}

namespace {

SteinerTree finish(const Instance& inst, std::vector<int> edge_indices) {
    SteinerTree tree;
    tree.edge_indices = std::move(edge_indices);
    std::sort(tree.edge_indices.begin(), tree.edge_indices.end());
    std::set<int> nodes;
    for (int ei : tree.edge_indices) {
        tree.cost += inst.edges()[ei].cost;
        nodes.insert(inst.edges()[ei].u);
        nodes.insert(inst.edges()[ei].v);
    }
    if (nodes.empty()) nodes.insert(inst.terminals()[0]);
    tree.nodes.assign(nodes.begin(), nodes.end());
    return tree;
}

}  // namespace

SteinerTree prune_to_steiner_tree(const Instance& inst, const std::vector<int>& edge_indices) {
    // restrict to the component containing the terminals
    UnionFind uf(inst.num_nodes());
    for (int ei : edge_indices) uf.unite(inst.edges()[ei].u, inst.edges()[ei].v);
    int root = uf.find(inst.terminals()[0]);
    for (int t : inst.terminals())
        if (uf.find(t) != root)
            throw std::runtime_error("prune: subgraph does not connect the terminals");

    // MST of the component, cheapest edges first, index breaks ties
    std::vector<int> order(edge_indices.begin(), edge_indices.end());
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (inst.edges()[a].cost != inst.edges()[b].cost)
            return inst.edges()[a].cost < inst.edges()[b].cost;
        return a < b;
    });
    UnionFind mstuf(inst.num_nodes());
    std::vector<int> kept;
    std::map<int, std::vector<std::pair<int, int>>> adj;  // node -> (other, edge)
    for (int ei : order) {
        const Edge& e = inst.edges()[ei];
        if (uf.find(e.u) != root) continue;
        if (mstuf.unite(e.u, e.v)) {
            kept.push_back(ei);
            adj[e.u].push_back({e.v, ei});
            adj[e.v].push_back({e.u, ei});
        }
    }

    // peel nonterminal leaves
    std::set<int> removed;
    std::map<int, int> degree;
    for (auto& [v, nb] : adj) degree[v] = static_cast<int>(nb.size());
    std::vector<int> stack;
    for (auto& [v, deg] : degree)
        if (deg == 1 && !inst.is_terminal(v)) stack.push_back(v);
    std::set<int> dead_nodes;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (dead_nodes.count(v)) continue;
        dead_nodes.insert(v);
        for (auto [w, ei] : adj[v]) {
            if (removed.count(ei)) continue;
            removed.insert(ei);
            if (--degree[w] == 1 && !inst.is_terminal(w)) stack.push_back(w);
        }
    }
    std::vector<int> final_edges;
    for (int ei : kept)
        if (!removed.count(ei)) final_edges.push_back(ei);
    return finish(inst, std::move(final_edges));
}

SteinerTree tm(const Instance& inst) {
    const int n = inst.num_nodes();
    std::vector<char> in_tree(n, 0);
    std::vector<char> reached_terminal(n, 0);
    in_tree[inst.terminals()[0]] = 1;
    reached_terminal[inst.terminals()[0]] = 1;
    int remaining = inst.num_terminals() - 1;
    std::vector<int> edges;

    std::vector<double> dist(n);
    std::vector<int> pred_edge(n);
    while (remaining > 0) {
        // multi-source search from the current tree
        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(pred_edge.begin(), pred_edge.end(), -1);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
        for (int v = 0; v < n; ++v)
            if (in_tree[v]) { dist[v] = 0; queue.push({0, v}); }
        std::vector<char> done(n, 0);
        while (!queue.empty()) {
            auto [d, v] = queue.top();
            queue.pop();
            if (done[v]) continue;
            done[v] = 1;
            for (auto [w, ei] : inst.neighbors(v)) {
                double nd = d + inst.edges()[ei].cost;
                if (nd < dist[w] - kCostEps) {
                    dist[w] = nd;
                    pred_edge[w] = ei;
                    queue.push({nd, w});
                }
            }
        }
        int best = -1;
        for (int t : inst.terminals())
            if (!reached_terminal[t] && (best < 0 || dist[t] < dist[best] - kCostEps)) best = t;
        // attach the path, stopping at the first tree node
        for (int v = best; !in_tree[v];) {
            in_tree[v] = 1;
            int ei = pred_edge[v];
            edges.push_back(ei);
            v = inst.edges()[ei].u == v ? inst.edges()[ei].v : inst.edges()[ei].u;
        }
        reached_terminal[best] = 1;
        --remaining;
    }
    return prune_to_steiner_tree(inst, edges);
}

SteinerTree kmb(const Instance& inst, const DistanceOracle& oracle) {
    auto closure = metric_closure(oracle, inst.terminals());
    auto closure_mst = mst(closure);
    std::set<int> edges;
    for (int ci : closure_mst.edge_indices) {
        int a = inst.terminals()[closure.edges[ci].u];
        int b = inst.terminals()[closure.edges[ci].v];
        auto path = oracle.path(a, b);
        for (size_t i = 0; i + 1 < path.size(); ++i)
            for (auto [w, ei] : inst.neighbors(path[i]))
                if (w == path[i + 1]) {
                    edges.insert(ei);
                    break;
                }
    }
    return prune_to_steiner_tree(inst, {edges.begin(), edges.end()});
}

SteinerTree mehlhorn(const Instance& inst) {
    auto vp = voronoi_regions(inst);
    // best boundary candidate per terminal pair
    std::map<std::pair<int, int>, std::pair<double, int>> best;  // pair -> (cost, edge)
    for (size_t ei = 0; ei < inst.edges().size(); ++ei) {
        const Edge& e = inst.edges()[ei];
        int a = vp.owner[e.u], b = vp.owner[e.v];
        if (a == b) continue;
        double c = vp.dist[e.u] + e.cost + vp.dist[e.v];
        auto key = std::minmax(a, b);
        auto it = best.find(key);
        if (it == best.end() || c < it->second.first - kCostEps)
            best[key] = {c, static_cast<int>(ei)};
    }
    WeightedGraph tg;
    tg.n = inst.num_terminals();
    std::vector<int> via;  // boundary edge per candidate
    for (const auto& [key, val] : best) {
        tg.edges.push_back({inst.terminal_index(key.first), inst.terminal_index(key.second),
                            val.first});
        via.push_back(val.second);
    }
    auto tmst = mst(tg);
    std::set<int> edges;
    for (int ci : tmst.edge_indices) {
        int ei = via[ci];
        edges.insert(ei);
        for (int v : {inst.edges()[ei].u, inst.edges()[ei].v})
            while (vp.pred_edge[v] >= 0) {
                edges.insert(vp.pred_edge[v]);
                const Edge& pe = inst.edges()[vp.pred_edge[v]];
                v = pe.u == v ? pe.v : pe.u;
            }
    }
    return prune_to_steiner_tree(inst, {edges.begin(), edges.end()});
}

double rho_k(int k) {
    if (k < 2) throw std::invalid_argument("rho_k: k must be at least 2");
    int r = static_cast<int>(std::floor(std::log2(static_cast<double>(k))));
    // guard against log2 landing just below an exact power of two
    while ((1LL << (r + 1)) <= k) ++r;
    while ((1LL << r) > k) --r;
    double p = static_cast<double>(1LL << r);
    return 1.0 + p / ((r - 1) * p + k);
}

}  // namespace steiner
