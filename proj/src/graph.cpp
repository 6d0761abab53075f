#include "steiner/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

namespace steiner {

Instance::Instance(int num_nodes, std::vector<Edge> edges, std::vector<int> terminals,
                   std::string name)
    : n_(num_nodes), name_(std::move(name)) {
    if (n_ <= 0) throw std::invalid_argument("instance: node count must be positive");

    std::map<std::pair<int, int>, double> collapsed;
    for (const Edge& e : edges) {
        if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
            throw std::invalid_argument("instance: edge endpoint out of range");
        if (e.u == e.v) throw std::invalid_argument("instance: self-loop");
        if (e.cost < 0.0) throw std::invalid_argument("instance: negative edge cost");
        auto key = std::minmax(e.u, e.v);
        auto [it, inserted] = collapsed.emplace(key, e.cost);
        if (!inserted) it->second = std::min(it->second, e.cost);
    }
    edges_.reserve(collapsed.size());
    for (const auto& [key, cost] : collapsed) edges_.push_back({key.first, key.second, cost});

    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
    if (terminals.size() < 2) throw std::invalid_argument("instance: need at least 2 terminals");
    for (int t : terminals)
        if (t < 0 || t >= n_) throw std::invalid_argument("instance: terminal out of range");
    terminals_ = std::move(terminals);

    is_terminal_.assign(n_, 0);
    terminal_index_.assign(n_, -1);
    for (size_t i = 0; i < terminals_.size(); ++i) {
        is_terminal_[terminals_[i]] = 1;
        terminal_index_[terminals_[i]] = static_cast<int>(i);
    }

    adj_.assign(n_, {});
    for (size_t i = 0; i < edges_.size(); ++i) {
        adj_[edges_[i].u].push_back({edges_[i].v, static_cast<int>(i)});
        adj_[edges_[i].v].push_back({edges_[i].u, static_cast<int>(i)});
    }

    // connectivity
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto [w, ei] : adj_[v])
            if (!seen[w]) { seen[w] = 1; ++count; stack.push_back(w); }
    }
    if (count != n_) throw std::invalid_argument("instance: graph is disconnected");
}

double Instance::density() const {
    double pairs = 0.5 * n_ * (n_ - 1);
    return pairs > 0 ? edges_.size() / pairs : 0.0;
}

Instance Instance::with_terminals(std::vector<int> terminals) const {
    return Instance(n_, edges_, std::move(terminals), name_);
}

double DistanceOracle::dist(int u, int v) const {
    if (u == v) return 0.0;
    int r = row_of_[u];
    if (r >= 0) return dist_[r][v];
    r = row_of_[v];
    if (r < 0) throw std::out_of_range("oracle: pair not covered (sssp mode, two nonterminals)");
    return dist_[r][u];
}

bool DistanceOracle::valid(int u, int v) const {
    if (u == v) return true;
    int r = row_of_[u];
    if (r >= 0) return valid_[r][v];
    r = row_of_[v];
    if (r < 0) throw std::out_of_range("oracle: pair not covered (sssp mode, two nonterminals)");
    return valid_[r][u];
}

std::vector<int> DistanceOracle::path(int u, int v) const {
    int r = row_of_[u];
    bool flipped = false;
    if (r < 0) { r = row_of_[v]; std::swap(u, v); flipped = true; }
    if (r < 0) throw std::out_of_range("oracle: pair not covered");
    if (!std::isfinite(dist_[r][v])) throw std::runtime_error("oracle: no recorded path");
    std::vector<int> nodes;
    int guard = static_cast<int>(pred_[r].size());
    for (int x = v; x != u; x = pred_[r][x]) {
        if (x < 0 || guard-- == 0) throw std::logic_error("oracle: predecessor chain broken");
        nodes.push_back(x);
    }
    nodes.push_back(u);
    if (!flipped) std::reverse(nodes.begin(), nodes.end());
    return nodes;
}

namespace {

// Dijkstra from one source. Under prefer, labels compare lexicographically by
// (dist, -interior terminal count): ties resolve toward paths through
// terminals; queue order keeps the result deterministic. A rewire needs a
// strictly larger interior count, which cannot hold around a cycle, so the
// predecessor graph stays acyclic. Interior counts only grow, so a
// node may be relaxed again when an equal-distance label with more interior
// terminals arrives (matters on zero-cost plateaus); the count is bounded by
// the terminal count, which bounds the rework. Under forbid, edges are never
// relaxed out of a non-source terminal.
void dijkstra_row(const Instance& inst, int source, SpPolicy policy,
                  std::vector<double>& dist, std::vector<int>& pred,
                  std::vector<char>& valid) {
    const int n = inst.num_nodes();
    dist.assign(n, kInf);
    pred.assign(n, -1);
    std::vector<int> interior(n, -1);
    dist[source] = 0.0;
    interior[source] = 0;

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    queue.push({0.0, source});

    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (d > dist[v] + kCostEps) continue;
        if (policy == SpPolicy::forbid && v != source && inst.is_terminal(v)) continue;
        int out = interior[v] + ((v != source && inst.is_terminal(v)) ? 1 : 0);
        for (auto [w, ei] : inst.neighbors(v)) {
            if (w == source) continue;
            double nd = dist[v] + inst.edges()[ei].cost;
            if (nd < dist[w] - kCostEps) {
                dist[w] = nd;
                interior[w] = out;
                pred[w] = v;
                queue.push({nd, w});
            } else if (nd < dist[w] + kCostEps && policy == SpPolicy::prefer) {
                if (out > interior[w]) {
                    interior[w] = out;
                    pred[w] = v;
                    queue.push({dist[w], w});
                }
                // no index tie-break at equal interior: rewiring pred on a
                // zero-cost plateau can close a predecessor cycle
            }
        }
    }

    valid.assign(n, 0);
    for (int v = 0; v < n; ++v) {
        if (!std::isfinite(dist[v])) continue;
        valid[v] = (policy == SpPolicy::forbid) ? 1 : (interior[v] == 0 ? 1 : 0);
    }
    valid[source] = 1;
}

}  // namespace

DistanceOracle shortest_paths(const Instance& inst, DistMode mode, SpPolicy policy) {
    DistanceOracle oracle;
    oracle.mode_ = mode;
    oracle.policy_ = policy;
    const int n = inst.num_nodes();
    oracle.row_of_.assign(n, -1);

    std::vector<int> sources;
    if (mode == DistMode::apsp) {
        sources.resize(n);
        for (int v = 0; v < n; ++v) sources[v] = v;
    } else {
        sources = inst.terminals();
    }
    oracle.dist_.resize(sources.size());
    oracle.pred_.resize(sources.size());
    oracle.valid_.resize(sources.size());
    oracle.source_of_row_ = sources;
    for (size_t i = 0; i < sources.size(); ++i) {
        oracle.row_of_[sources[i]] = static_cast<int>(i);
        dijkstra_row(inst, sources[i], policy, oracle.dist_[i], oracle.pred_[i],
                     oracle.valid_[i]);
    }
    return oracle;
}

DistMode auto_dist_mode(const Instance& inst) {
    return inst.density() <= 0.25 ? DistMode::sssp : DistMode::apsp;
}

VoronoiPartition voronoi_regions(const Instance& inst) {
    const int n = inst.num_nodes();
    VoronoiPartition vp;
    vp.owner.assign(n, -1);
    vp.dist.assign(n, kInf);
    vp.pred_edge.assign(n, -1);

    // super-source search; tie-break by terminal index for determinism
    using Item = std::tuple<double, int, int>;  // (dist, owner terminal index, node)
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    std::vector<int> owner_index(n, std::numeric_limits<int>::max());
    for (int i = 0; i < inst.num_terminals(); ++i) {
        int t = inst.terminals()[i];
        vp.dist[t] = 0.0;
        vp.owner[t] = t;
        owner_index[t] = i;
        queue.push({0.0, i, t});
    }
    std::vector<char> done(n, 0);
    while (!queue.empty()) {
        auto [d, oi, v] = queue.top();
        queue.pop();
        if (done[v]) continue;
        done[v] = 1;
        for (auto [w, ei] : inst.neighbors(v)) {
            double nd = d + inst.edges()[ei].cost;
            bool take = nd < vp.dist[w] - kCostEps ||
                        (nd < vp.dist[w] + kCostEps && oi < owner_index[w]);
            if (take && !done[w]) {
                vp.dist[w] = nd;
                vp.owner[w] = inst.terminals()[oi];
                vp.pred_edge[w] = ei;
                owner_index[w] = oi;
                queue.push({nd, oi, w});
            }
        }
    }
    return vp;
}

std::optional<Tree> try_mst(const WeightedGraph& g) {
    std::vector<int> order(g.edges.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (g.edges[a].cost != g.edges[b].cost) return g.edges[a].cost < g.edges[b].cost;
        return a < b;
    });
    UnionFind uf(g.n);
    Tree tree;
    for (int ei : order) {
        if (uf.unite(g.edges[ei].u, g.edges[ei].v)) {
            tree.edge_indices.push_back(ei);
            tree.cost += g.edges[ei].cost;
        }
    }
    if (static_cast<int>(tree.edge_indices.size()) != g.n - 1) return std::nullopt;
    return tree;
}

Tree mst(const WeightedGraph& g) {
    auto t = try_mst(g);
    if (!t) throw std::runtime_error("mst: graph is disconnected");
    return *t;
}

WeightedGraph metric_closure(const DistanceOracle& oracle, const std::vector<int>& U) {
    WeightedGraph g;
    g.n = static_cast<int>(U.size());
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
            g.edges.push_back({i, j, oracle.dist(U[i], U[j])});
    return g;
}

void FlowNetwork::add_arc(int from, int to, double capacity) {
    if (capacity < 0) throw std::invalid_argument("flow: negative capacity");
    arcs_[from].push_back({to, capacity, static_cast<int>(arcs_[to].size())});
    arcs_[to].push_back({from, 0.0, static_cast<int>(arcs_[from].size()) - 1});
}

bool FlowNetwork::bfs_levels(int s, int t, std::vector<int>& level) {
    level.assign(n_, -1);
    std::queue<int> queue;
    level[s] = 0;
    queue.push(s);
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop();
        for (const Arc& a : arcs_[v]) {
            if (a.cap > kCostEps && level[a.to] < 0) {
                level[a.to] = level[v] + 1;
                queue.push(a.to);
            }
        }
    }
    return level[t] >= 0;
}

double FlowNetwork::dfs_push(int v, int t, double pushed, std::vector<int>& level,
                             std::vector<int>& it) {
    if (v == t) return pushed;
    for (int& i = it[v]; i < static_cast<int>(arcs_[v].size()); ++i) {
        Arc& a = arcs_[v][i];
        if (a.cap > kCostEps && level[a.to] == level[v] + 1) {
            double got = dfs_push(a.to, t, std::min(pushed, a.cap), level, it);
            if (got > kCostEps) {
                a.cap -= got;
                arcs_[a.to][a.rev].cap += got;
                return got;
            }
        }
    }
    return 0.0;
}

MaxFlowResult FlowNetwork::max_flow(int source, int sink) {
    MaxFlowResult result;
    std::vector<int> level, it;
    while (bfs_levels(source, sink, level)) {
        it.assign(n_, 0);
        double pushed;
        while ((pushed = dfs_push(source, sink, kInf, level, it)) > kCostEps)
            result.value += pushed;
    }
    bfs_levels(source, sink, level);
    result.sink_side.assign(n_, 0);
    for (int v = 0; v < n_; ++v) result.sink_side[v] = level[v] < 0 ? 1 : 0;
    return result;
}

}  // namespace steiner
