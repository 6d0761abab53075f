#include "steiner/components.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "steiner/exact.hpp"

namespace steiner {

const FullComponent* ComponentSet::find(const std::vector<int>& terminals) const {
    for (const auto& c : components_)
        if (c.terminals == terminals) return &c;
    return nullptr;
}

void ComponentSet::add(FullComponent c) {
    if (c.inner_terminal) ++flagged_inner_terminal_;
    for (auto& existing : components_)
        if (existing.terminals == c.terminals) {
            if (c.cost < existing.cost - kCostEps) existing = std::move(c);
            return;
        }
    components_.push_back(std::move(c));
}

void ComponentSet::merge(const ComponentSet& other) {
    for (const auto& c : other.components_) {
        FullComponent copy = c;
        bool flagged = copy.inner_terminal;
        copy.inner_terminal = false;  // avoid double counting in add()
        add(std::move(copy));
        if (flagged) components_.back().inner_terminal = true;
    }
    dropped_inner_terminal_ += other.dropped_inner_terminal_;
}

std::string ComponentSet::dump(const Instance& inst) const {
    std::ostringstream out;
    for (const auto& c : components_) {
        for (std::size_t i = 0; i < c.terminals.size(); ++i)
            out << (i ? " " : "") << c.terminals[i] + 1;
        out << " | " << c.cost << " |";
        for (int ei : c.edge_indices)
            out << " " << inst.edges()[ei].u + 1 << "-" << inst.edges()[ei].v + 1;
        out << "\n";
    }
    return out.str();
}

std::vector<int> expand_path(const Instance& inst, const DistanceOracle& oracle, int u, int v) {
    if (!oracle.has(u, v) || !std::isfinite(oracle.dist(u, v)))
        throw std::runtime_error("expand: pair has no recorded path");
    std::vector<int> edges;
    auto path = oracle.path(u, v);
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        for (auto [w, ei] : inst.neighbors(path[i]))
            if (w == path[i + 1]) {
                edges.push_back(ei);
                break;
            }
    return edges;
}

std::optional<FullComponent> canonical_component(const Instance& inst,
                                                 std::vector<int> terminals,
                                                 const std::vector<int>& edge_indices,
                                                 bool allow_inner_terminal) {
    std::sort(terminals.begin(), terminals.end());
    std::vector<int> edges(edge_indices);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    UnionFind uf(inst.num_nodes());
    for (int ei : edges) uf.unite(inst.edges()[ei].u, inst.edges()[ei].v);
    int root = uf.find(terminals[0]);
    for (int t : terminals)
        if (uf.find(t) != root) return std::nullopt;

    // MST of the relevant connected part, cheapest first, index breaks ties
    std::sort(edges.begin(), edges.end(), [&](int a, int b) {
        if (inst.edges()[a].cost != inst.edges()[b].cost)
            return inst.edges()[a].cost < inst.edges()[b].cost;
        return a < b;
    });
    UnionFind mstuf(inst.num_nodes());
    std::map<int, std::vector<std::pair<int, int>>> adj;
    std::vector<int> kept;
    for (int ei : edges) {
        const Edge& e = inst.edges()[ei];
        if (uf.find(e.u) != root) continue;
        if (mstuf.unite(e.u, e.v)) {
            kept.push_back(ei);
            adj[e.u].push_back({e.v, ei});
            adj[e.v].push_back({e.u, ei});
        }
    }

    // peel leaves outside the terminal set
    std::set<int> member(terminals.begin(), terminals.end());
    std::map<int, int> degree;
    for (auto& [v, nb] : adj) degree[v] = static_cast<int>(nb.size());
    std::set<int> removed_edges, dead;
    std::vector<int> stack;
    for (auto& [v, deg] : degree)
        if (deg == 1 && !member.count(v)) stack.push_back(v);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (dead.count(v)) continue;
        dead.insert(v);
        for (auto [w, ei] : adj[v]) {
            if (removed_edges.count(ei)) continue;
            removed_edges.insert(ei);
            if (--degree[w] == 1 && !member.count(w)) stack.push_back(w);
        }
    }

    FullComponent c;
    c.terminals = std::move(terminals);
    std::set<int> nodes;
    for (int ei : kept) {
        if (removed_edges.count(ei)) continue;
        c.edge_indices.push_back(ei);
        c.cost += inst.edges()[ei].cost;
        nodes.insert(inst.edges()[ei].u);
        nodes.insert(inst.edges()[ei].v);
    }
    for (int v : nodes) {
        if (member.count(v)) continue;
        if (inst.is_terminal(v)) return std::nullopt;  // foreign terminal inside
        c.inner_nodes.push_back(v);
    }
    for (int t : c.terminals) {
        int deg = 0;
        for (int ei : c.edge_indices) {
            const Edge& e = inst.edges()[ei];
            deg += (e.u == t) + (e.v == t);
        }
        if (deg != 1) {
            if (!allow_inner_terminal) return std::nullopt;
            c.inner_terminal = true;
        }
    }
    return c;
}

namespace {

// all size-`size` subsets of `pool`, ascending
template <typename Fn>
void for_each_subset(const std::vector<int>& pool, int size, Fn&& fn) {
    int n = static_cast<int>(pool.size());
    if (size > n) return;
    if (size == 0) {
        fn(std::vector<int>{});
        return;
    }
    std::vector<int> pick(size);
    for (int i = 0; i < size; ++i) pick[i] = i;
    std::vector<int> subset(size);
    while (true) {
        for (int i = 0; i < size; ++i) subset[i] = pool[pick[i]];
        fn(subset);
        int j = size - 1;
        while (j >= 0 && pick[j] == n - size + j) --j;
        if (j < 0) break;
        ++pick[j];
        for (int i = j + 1; i < size; ++i) pick[i] = pick[i - 1] + 1;
    }
}

bool usable_pair(const DistanceOracle& oracle, int u, int v) {
    return oracle.has(u, v) && oracle.valid(u, v) && std::isfinite(oracle.dist(u, v));
}

bool finite_pair(const DistanceOracle& oracle, int u, int v) {
    return oracle.has(u, v) && std::isfinite(oracle.dist(u, v));
}

void add_two_components(const Instance& inst, const DistanceOracle& oracle, ComponentSet& set) {
    const auto& R = inst.terminals();
    for (std::size_t a = 0; a < R.size(); ++a)
        for (std::size_t b = a + 1; b < R.size(); ++b) {
            if (!usable_pair(oracle, R[a], R[b])) continue;
            auto c = canonical_component(inst, {R[a], R[b]},
                                         expand_path(inst, oracle, R[a], R[b]));
            if (c) set.add(std::move(*c));
        }
}

// Per terminal set: the candidate of record is the one minimizing the closure
// MST value over all admitted inner sets (plain finite distances, ties going
// to the earliest clean candidate); the terminal set is dropped entirely when
// no minimum-value candidate expands to a proper component, because the
// optimum then decomposes into smaller components that are present anyway.
struct ArgminTracker {
    double best_metric = kInf;
    std::optional<FullComponent> best;
    bool saw_candidate = false;

    void offer(const Instance& inst, const DistanceOracle& oracle,
               const std::vector<int>& terminals, const std::vector<int>& inner) {
        std::vector<int> nodes(terminals);
        nodes.insert(nodes.end(), inner.begin(), inner.end());
        WeightedGraph g;
        g.n = static_cast<int>(nodes.size());
        for (int i = 0; i < g.n; ++i)
            for (int j = i + 1; j < g.n; ++j)
                if (finite_pair(oracle, nodes[i], nodes[j]))
                    g.edges.push_back({i, j, oracle.dist(nodes[i], nodes[j])});
        auto tree = try_mst(g);
        if (!tree) return;
        saw_candidate = true;
        double m = tree->cost;
        if (m >= best_metric + kCostEps) return;
        if (m < best_metric - kCostEps) {
            best_metric = m;
            best.reset();
        } else if (best) {
            return;  // tie, already have a clean expansion
        }
        std::vector<int> edges;
        for (int ci : tree->edge_indices) {
            auto part = expand_path(inst, oracle, nodes[g.edges[ci].u], nodes[g.edges[ci].v]);
            edges.insert(edges.end(), part.begin(), part.end());
        }
        best = canonical_component(inst, terminals, edges);
        // d(C) is the closure tree value; overlapping expansions may realize
        // it cheaper, but pricing the overlap would smuggle inner nodes past
        // the candidate restriction.
        if (best) best->cost = m;
    }

    void commit(ComponentSet& set) {
        if (best)
            set.add(std::move(*best));
        else if (saw_candidate)
            set.count_dropped();
    }
};

void check_gen_pre(const DistanceOracle& oracle, int k) {
    if (k < 2) throw std::invalid_argument("component generation: k must be at least 2");
    if (k >= 4 && oracle.mode() != DistMode::apsp)
        throw std::invalid_argument("component generation: k >= 4 needs apsp distances");
}

}  // namespace

ComponentSet gen_all_naive(const Instance& inst, const DistanceOracle& oracle, int k) {
    check_gen_pre(oracle, k);
    ComponentSet set(k, "all:naive");
    add_two_components(inst, oracle, set);
    std::vector<int> nonterminals;
    for (int v = 0; v < inst.num_nodes(); ++v)
        if (!inst.is_terminal(v)) nonterminals.push_back(v);
    for (int ell = 3; ell <= std::min(k, inst.num_terminals()); ++ell)
        for_each_subset(inst.terminals(), ell, [&](const std::vector<int>& Rp) {
            ArgminTracker tracker;
            for (int s = 0; s <= ell - 2; ++s)
                for_each_subset(nonterminals, s, [&](const std::vector<int>& S) {
                    tracker.offer(inst, oracle, Rp, S);
                });
            tracker.commit(set);
        });
    return set;
}

ComponentSet gen_voronoi(const Instance& inst, const DistanceOracle& oracle,
                         const VoronoiPartition& voronoi, int k) {
    check_gen_pre(oracle, k);
    ComponentSet set(k, "voronoi");
    add_two_components(inst, oracle, set);
    for (int ell = 3; ell <= std::min(k, inst.num_terminals()); ++ell)
        for_each_subset(inst.terminals(), ell, [&](const std::vector<int>& Rp) {
            std::set<int> owners(Rp.begin(), Rp.end());
            std::vector<int> region;
            for (int v = 0; v < inst.num_nodes(); ++v)
                if (!inst.is_terminal(v) && owners.count(voronoi.owner[v])) region.push_back(v);
            ArgminTracker tracker;
            for (int s = 0; s <= ell - 2; ++s)
                for_each_subset(region, s, [&](const std::vector<int>& S) {
                    tracker.offer(inst, oracle, Rp, S);
                });
            tracker.commit(set);
        });
    return set;
}

ComponentSet gen_all_smart(const Instance& inst, const DistanceOracle& oracle, int k) {
    check_gen_pre(oracle, k);
    ComponentSet set(k, "all:smart");
    add_two_components(inst, oracle, set);
    std::vector<int> nonterminals;
    for (int v = 0; v < inst.num_nodes(); ++v)
        if (!inst.is_terminal(v)) nonterminals.push_back(v);

    struct InnerTree {
        std::vector<int> nodes;
        std::vector<std::pair<int, int>> pairs;  // closure edges inside the tree
        double cost;
    };
    std::vector<InnerTree> list;
    for (int s = 1; s <= k - 2; ++s)
        for_each_subset(nonterminals, s, [&](const std::vector<int>& S) {
            WeightedGraph g;
            g.n = static_cast<int>(S.size());
            for (int i = 0; i < g.n; ++i)
                for (int j = i + 1; j < g.n; ++j)
                    if (finite_pair(oracle, S[i], S[j]))
                        g.edges.push_back({i, j, oracle.dist(S[i], S[j])});
            auto tree = try_mst(g);
            if (!tree) return;
            InnerTree entry;
            entry.nodes = S;
            entry.cost = tree->cost;
            for (int ci : tree->edge_indices)
                entry.pairs.push_back({S[g.edges[ci].u], S[g.edges[ci].v]});
            list.push_back(std::move(entry));
        });

    for (int ell = 3; ell <= std::min(k, inst.num_terminals()); ++ell)
        for_each_subset(inst.terminals(), ell, [&](const std::vector<int>& Rp) {
            for (const auto& entry : list) {
                if (static_cast<int>(entry.nodes.size()) > ell - 2) continue;
                std::vector<int> edges;
                bool ok = true;
                double metric = entry.cost;
                for (auto [a, b] : entry.pairs) {
                    auto part = expand_path(inst, oracle, a, b);
                    edges.insert(edges.end(), part.begin(), part.end());
                }
                for (int t : Rp) {
                    int best = -1;
                    double best_cost = kInf;
                    for (int s : entry.nodes)
                        if (finite_pair(oracle, t, s) && oracle.dist(t, s) < best_cost - kCostEps) {
                            best_cost = oracle.dist(t, s);
                            best = s;
                        }
                    if (best < 0) { ok = false; break; }
                    metric += best_cost;
                    auto part = expand_path(inst, oracle, t, best);
                    edges.insert(edges.end(), part.begin(), part.end());
                }
                if (!ok) continue;
                auto c = canonical_component(inst, Rp, edges, /*allow_inner_terminal=*/true);
                if (c) {
                    c->cost = metric;
                    set.add(std::move(*c));
                }
            }
        });
    return set;
}

ComponentSet gen_all_dw(const Instance& inst, int k) {
    if (k < 2) throw std::invalid_argument("component generation: k must be at least 2");
    auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
    DreyfusWagner dw(inst, oracle, std::min(k, inst.num_terminals()));
    ComponentSet set(k, "all:dw");
    for (int ell = 2; ell <= std::min(k, inst.num_terminals()); ++ell)
        for_each_subset(inst.terminals(), ell, [&](const std::vector<int>& Rp) {
            auto result = dw.tree_for(Rp);
            auto c = canonical_component(inst, Rp, result.edge_indices);
            if (c)
                set.add(std::move(*c));
            else
                set.count_dropped();
        });
    return set;
}

void compute_loss(const Instance& inst, FullComponent& c) {
    // Kruskal over the component plus free terminal-terminal links; ties are
    // broken toward the free links, then by edge index.
    std::map<int, int> id;
    int m = 0;
    for (int t : c.terminals) id[t] = m++;
    for (int v : c.inner_nodes) id[v] = m++;
    UnionFind uf(m);
    for (std::size_t i = 1; i < c.terminals.size(); ++i)
        uf.unite(id[c.terminals[0]], id[c.terminals[i]]);
    std::vector<int> order(c.edge_indices);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (inst.edges()[a].cost != inst.edges()[b].cost)
            return inst.edges()[a].cost < inst.edges()[b].cost;
        return a < b;
    });
    c.loss_edges.clear();
    c.loss_cost = 0;
    for (int ei : order) {
        const Edge& e = inst.edges()[ei];
        if (uf.unite(id[e.u], id[e.v])) {
            c.loss_edges.push_back(ei);
            c.loss_cost += e.cost;
        }
    }
    std::sort(c.loss_edges.begin(), c.loss_edges.end());
}

void select_core_edges(const Instance& inst, FullComponent& c, CoreMode mode,
                       std::uint64_t seed) {
    if (mode == CoreMode::loss_complement) {
        if (c.loss_edges.empty() && !c.inner_nodes.empty()) compute_loss(inst, c);
        c.core_edges.clear();
        std::set<int> loss(c.loss_edges.begin(), c.loss_edges.end());
        for (int ei : c.edge_indices)
            if (!loss.count(ei)) c.core_edges.push_back(ei);
    } else {
        std::map<int, int> id;
        int m = 0;
        for (int t : c.terminals) id[t] = m++;
        for (int v : c.inner_nodes) id[v] = m++;
        UnionFind uf(m);
        for (std::size_t i = 1; i < c.terminals.size(); ++i)
            uf.unite(id[c.terminals[0]], id[c.terminals[i]]);
        std::vector<int> order(c.edge_indices);
        std::mt19937_64 rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
        c.core_edges.clear();
        for (int ei : order) {
            const Edge& e = inst.edges()[ei];
            if (!uf.unite(id[e.u], id[e.v])) c.core_edges.push_back(ei);
        }
        std::sort(c.core_edges.begin(), c.core_edges.end());
    }
    if (c.core_edges.size() != c.terminals.size() - 1)
        throw std::logic_error("core selection: wrong core edge count");
}

}  // namespace steiner
