#include "steiner/gcf.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace steiner {

namespace {

// strict total order on M edges; ids never repeat
inline bool edge_key_less(double ca, int ia, double cb, int ib) {
    if (ca != cb) return ca < cb;
    return ia < ib;
}

}  // namespace

// Bottleneck oracle over MST(M). query(i,j) is the max edge cost on the MST
// path between terminal indices i and j; all variants agree exactly.
class SaveOracle {
public:
    virtual ~SaveOracle() = default;
    virtual double query(int ti, int tj) const = 0;
    // new_edge entered edges(); replaced_edge left the MST (-1 if the MST is
    // unchanged)
    virtual void after_append(const ContractionState& state, int new_edge,
                              int replaced_edge) = 0;
    virtual std::pair<int, int> shape() const {
        throw std::logic_error("save oracle: no tree shape in this mode");
    }
};

namespace {

// ---- matrix variant: per-terminal DFS rows, rebuilt on every change ----

class MatrixSave : public SaveOracle {
public:
    explicit MatrixSave(const ContractionState& state) { rebuild(state); }

    double query(int ti, int tj) const override {
        return table_[static_cast<std::size_t>(ti) * r_ + tj];
    }

    void after_append(const ContractionState& state, int, int replaced) override {
        if (replaced >= 0) rebuild(state);
    }

private:
    int r_ = 0;
    std::vector<double> table_;

    void rebuild(const ContractionState& state) {
        r_ = state.instance().num_terminals();
        table_.assign(static_cast<std::size_t>(r_) * r_, 0.0);
        std::vector<std::pair<int, double>> stack;
        // adjacency restricted to MST edges lives in the state
        for (int s = 0; s < r_; ++s) {
            double* row = &table_[static_cast<std::size_t>(s) * r_];
            std::vector<char> seen(r_, 0);
            seen[s] = 1;
            stack.push_back({s, 0.0});
            while (!stack.empty()) {
                auto [v, best] = stack.back();
                stack.pop_back();
                row[v] = best;
                for (auto [w, ei] : state.mst_adjacency(v))
                    if (!seen[w]) {
                        seen[w] = 1;
                        stack.push_back({w, std::max(best, state.edges()[ei].cost)});
                    }
            }
        }
    }
};

// ---- cost hierarchy tree shared by the static and dynamic variants ----
//
// Leaves are the terminals; every inner node stands for an MST edge and
// carries its cost. Built like a Kruskal run in ascending (cost, id) order,
// so the lowest common ancestor of two leaves is exactly the max-cost edge
// on their MST path, and every ancestor costs at least its descendants.

struct WNode {
    double cost = 0.0;
    int edge = -1;  // M edge id for inner nodes, -1 for leaves
    int parent = -1;
    int left = -1;
    int right = -1;
    bool dead = false;
};

struct WTree {
    std::vector<WNode> nodes;  // first r entries are the terminal leaves
    int root = -1;
    int r = 0;
    std::unordered_map<int, int> inner_of;  // M edge id -> inner node

    void build(const ContractionState& state) {
        r = state.instance().num_terminals();
        nodes.assign(r, WNode{});
        inner_of.clear();
        std::vector<int> order = state.mst_edges();
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return edge_key_less(state.edges()[a].cost, a, state.edges()[b].cost, b);
        });
        UnionFind uf(r);
        std::vector<int> top(r);
        for (int i = 0; i < r; ++i) top[i] = i;
        for (int ei : order) {
            const MEdge& e = state.edges()[ei];
            int a = uf.find(e.u), b = uf.find(e.v);
            int x = static_cast<int>(nodes.size());
            nodes.push_back({e.cost, ei, -1, top[a], top[b], false});
            nodes[top[a]].parent = x;
            nodes[top[b]].parent = x;
            inner_of[ei] = x;
            uf.unite(a, b);
            top[uf.find(a)] = x;
        }
        root = top[uf.find(0)];
    }

    std::pair<int, int> shape() const {
        int leaves = 0, inner = 0;
        for (const auto& n : nodes)
            if (!n.dead) (n.edge < 0 ? leaves : inner)++;
        return {leaves, inner};
    }
};

class StaticSave : public SaveOracle {
public:
    explicit StaticSave(const ContractionState& state) { rebuild(state); }

    double query(int ti, int tj) const override {
        int a = first_[ti], b = first_[tj];
        if (a > b) std::swap(a, b);
        int k = log2_[b - a + 1];
        int x = euler_[table_min(k, a)], y = euler_[table_min(k, b - (1 << k) + 1)];
        int lca = depth_of(x) <= depth_of(y) ? x : y;
        return tree_.nodes[lca].cost;
    }

    void after_append(const ContractionState& state, int, int replaced) override {
        if (replaced >= 0) rebuild(state);
    }

    std::pair<int, int> shape() const override { return tree_.shape(); }

private:
    WTree tree_;
    std::vector<int> euler_, first_, depth_, log2_;
    std::vector<std::vector<int>> sparse_;  // positions of depth minima

    int depth_of(int node) const { return depth_[first_[node]]; }
    int table_min(int k, int pos) const {
        int a = sparse_[k][pos];
        return a;
    }

    void rebuild(const ContractionState& state) {
        tree_.build(state);
        euler_.clear();
        depth_.clear();
        first_.assign(tree_.nodes.size(), -1);
        // iterative Euler tour
        std::vector<std::pair<int, int>> stack{{tree_.root, 0}};
        std::vector<int> d(tree_.nodes.size(), 0);
        while (!stack.empty()) {
            auto [v, phase] = stack.back();
            stack.pop_back();
            if (first_[v] < 0) first_[v] = static_cast<int>(euler_.size());
            euler_.push_back(v);
            depth_.push_back(d[v]);
            if (phase == 0 && tree_.nodes[v].left >= 0) {
                stack.push_back({v, 1});
                d[tree_.nodes[v].left] = d[v] + 1;
                stack.push_back({tree_.nodes[v].left, 0});
            } else if (phase == 1) {
                stack.push_back({v, 2});
                d[tree_.nodes[v].right] = d[v] + 1;
                stack.push_back({tree_.nodes[v].right, 0});
            }
        }
        int m = static_cast<int>(euler_.size());
        log2_.assign(m + 1, 0);
        for (int i = 2; i <= m; ++i) log2_[i] = log2_[i / 2] + 1;
        int levels = log2_[m] + 1;
        sparse_.assign(levels, std::vector<int>(m));
        for (int i = 0; i < m; ++i) sparse_[0][i] = i;
        for (int k = 1; k < levels; ++k)
            for (int i = 0; i + (1 << k) <= m; ++i) {
                int a = sparse_[k - 1][i], b = sparse_[k - 1][i + (1 << (k - 1))];
                sparse_[k][i] = depth_[a] <= depth_[b] ? a : b;
            }
    }
};

// Updating variant: a contraction splices a new edge node into the hierarchy
// instead of rebuilding it. The two leaf-to-removed-edge paths are merged
// into one ascending chain with the new node at its cost position; nothing
// outside those paths moves.
class DynamicSave : public SaveOracle {
public:
    explicit DynamicSave(const ContractionState& state) {
        tree_.build(state);
        mark_.assign(tree_.nodes.size(), 0);
    }

    double query(int ti, int tj) const override {
        ++stamp_;
        for (int v = ti; v >= 0; v = tree_.nodes[v].parent) mark_[v] = stamp_;
        for (int v = tj; v >= 0; v = tree_.nodes[v].parent)
            if (mark_[v] == stamp_) return tree_.nodes[v].cost;
        throw std::logic_error("save oracle: leaves in different hierarchies");
    }

    void after_append(const ContractionState& state, int new_edge, int replaced) override {
        if (replaced < 0) return;
        const MEdge& e = state.edges()[new_edge];
        int f = tree_.inner_of.at(replaced);
        // (ancestor, its child on the leaf's path), strict ancestors below f
        using Step = std::pair<int, int>;
        auto path_to = [&](int leaf) {
            std::vector<Step> p;
            for (int v = leaf; tree_.nodes[v].parent != f; v = tree_.nodes[v].parent)
                p.push_back({tree_.nodes[v].parent, v});
            return p;
        };
        std::vector<Step> pu = path_to(e.u), pv = path_to(e.v);
        int u0 = static_cast<int>(tree_.nodes.size());
        tree_.nodes.push_back({e.cost, new_edge, -1, -1, -1, false});
        mark_.push_back(0);
        tree_.inner_of[new_edge] = u0;
        auto absorb = [&](std::vector<Step>& p, int leaf) {
            // subtrees cheaper than the new edge keep their shape
            std::size_t i = 0;
            int top = leaf;
            while (i < p.size() &&
                   edge_key_less(tree_.nodes[p[i].first].cost, tree_.nodes[p[i].first].edge,
                                 e.cost, new_edge)) {
                top = p[i].first;
                ++i;
            }
            p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(i));
            return top;
        };
        int ru = absorb(pu, e.u), rv = absorb(pv, e.v);
        tree_.nodes[u0].left = ru;
        tree_.nodes[u0].right = rv;
        tree_.nodes[ru].parent = u0;
        tree_.nodes[rv].parent = u0;
        // merge the two remaining chains in ascending key order above u0;
        // each node keeps its off-path child, the path side holds the chain
        int top = u0;
        std::size_t i = 0, j = 0;
        while (i < pu.size() || j < pv.size()) {
            Step s;
            if (j == pv.size() ||
                (i < pu.size() &&
                 edge_key_less(tree_.nodes[pu[i].first].cost, tree_.nodes[pu[i].first].edge,
                               tree_.nodes[pv[j].first].cost, tree_.nodes[pv[j].first].edge)))
                s = pu[i++];
            else
                s = pv[j++];
            int x = s.first;
            if (tree_.nodes[x].left == s.second)
                tree_.nodes[x].left = top;
            else if (tree_.nodes[x].right == s.second)
                tree_.nodes[x].right = top;
            else
                throw std::logic_error("save oracle: chain splice lost a child");
            tree_.nodes[top].parent = x;
            top = x;
        }
        int pf = tree_.nodes[f].parent;
        tree_.nodes[top].parent = pf;
        if (pf < 0)
            tree_.root = top;
        else if (tree_.nodes[pf].left == f)
            tree_.nodes[pf].left = top;
        else
            tree_.nodes[pf].right = top;
        tree_.nodes[f].dead = true;
        tree_.inner_of.erase(replaced);
    }

    std::pair<int, int> shape() const override { return tree_.shape(); }

private:
    WTree tree_;
    mutable std::vector<std::uint64_t> mark_;
    mutable std::uint64_t stamp_ = 0;
};

}  // namespace

ContractionState::ContractionState(const Instance& inst, const DistanceOracle& oracle,
                                   SaveMode mode)
    : inst_(&inst), oracle_(&oracle), mode_(mode) {
    const int r = inst.num_terminals();
    if (r < 2) throw std::invalid_argument("contraction state: need two terminals");
    const auto& R = inst.terminals();
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
            double d = oracle.dist(R[i], R[j]);
            if (!std::isfinite(d))
                throw std::invalid_argument("contraction state: disconnected terminals");
            edges_.push_back({i, j, d, kOriginClosure});
        }
    std::vector<int> order(edges_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return edge_key_less(edges_[a].cost, a, edges_[b].cost, b);
    });
    adj_.assign(r, {});
    UnionFind uf(r);
    for (int ei : order)
        if (uf.unite(edges_[ei].u, edges_[ei].v)) {
            mst_edges_.push_back(ei);
            mst_cost_ += edges_[ei].cost;
            adj_[edges_[ei].u].push_back({edges_[ei].v, ei});
            adj_[edges_[ei].v].push_back({edges_[ei].u, ei});
        }
    switch (mode_) {
        case SaveMode::matrix: save_ = std::make_unique<MatrixSave>(*this); break;
        case SaveMode::static_tree: save_ = std::make_unique<StaticSave>(*this); break;
        case SaveMode::dynamic_tree: save_ = std::make_unique<DynamicSave>(*this); break;
    }
}

ContractionState::~ContractionState() = default;
ContractionState::ContractionState(ContractionState&&) noexcept = default;
ContractionState& ContractionState::operator=(ContractionState&&) noexcept = default;

const std::vector<std::pair<int, int>>& ContractionState::mst_adjacency(int ti) const {
    return adj_[ti];
}

int ContractionState::find_replaced_mst_edge(int ti, int tj, double cost, int id) const {
    // max-key edge on the MST path ti..tj
    std::vector<int> parent_edge(adj_.size(), -1), stack{ti};
    std::vector<char> seen(adj_.size(), 0);
    seen[ti] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (v == tj) break;
        for (auto [w, ei] : adj_[v])
            if (!seen[w]) {
                seen[w] = 1;
                parent_edge[w] = ei;
                stack.push_back(w);
            }
    }
    int best = -1;
    for (int v = tj; v != ti;) {
        int ei = parent_edge[v];
        if (ei < 0) throw std::logic_error("contraction state: MST not spanning");
        if (best < 0 || edge_key_less(edges_[best].cost, best, edges_[ei].cost, ei)) best = ei;
        v = edges_[ei].u == v ? edges_[ei].v : edges_[ei].u;
    }
    if (edge_key_less(cost, id, edges_[best].cost, best)) return best;
    return -1;
}

int ContractionState::append_link(int ti, int tj, double cost, int origin) {
    if (ti == tj) throw std::invalid_argument("contraction state: self link");
    int id = static_cast<int>(edges_.size());
    edges_.push_back({ti, tj, cost, origin});
    int replaced = find_replaced_mst_edge(ti, tj, cost, id);
    if (replaced >= 0) {
        auto drop = [&](int v, int ei) {
            auto& a = adj_[v];
            a.erase(std::find_if(a.begin(), a.end(),
                                 [&](auto p) { return p.second == ei; }));
        };
        drop(edges_[replaced].u, replaced);
        drop(edges_[replaced].v, replaced);
        mst_edges_.erase(std::find(mst_edges_.begin(), mst_edges_.end(), replaced));
        mst_edges_.push_back(id);
        adj_[ti].push_back({tj, id});
        adj_[tj].push_back({ti, id});
        mst_cost_ += cost - edges_[replaced].cost;
    }
    save_->after_append(*this, id, replaced);
    return id;
}

void ContractionState::contract(const FullComponent& c) {
    std::vector<int> idx;
    for (int t : c.terminals) {
        int i = inst_->terminal_index(t);
        if (i < 0) throw std::invalid_argument("contract: node is not a terminal");
        idx.push_back(i);
    }
    std::sort(idx.begin(), idx.end());
    for (std::size_t i = 1; i < idx.size(); ++i)
        append_link(idx[0], idx[i], 0.0, kOriginZero);
}

void ContractionState::loss_contract(const FullComponent& c) {
    if (c.core_edges.empty() || c.loss_edges.empty())
        throw std::invalid_argument("loss contract: loss and core edges required");
    std::unordered_map<int, int> id;
    int m = 0;
    for (int t : c.terminals) id[t] = m++;
    for (int v : c.inner_nodes) id[v] = m++;
    UnionFind uf(m);
    for (int ei : c.loss_edges)
        uf.unite(id.at(inst_->edges()[ei].u), id.at(inst_->edges()[ei].v));
    std::unordered_map<int, int> part_terminal;
    for (int t : c.terminals) part_terminal[uf.find(id.at(t))] = t;
    for (int ei : c.core_edges) {
        const Edge& e = inst_->edges()[ei];
        int a = part_terminal.at(uf.find(id.at(e.u)));
        int b = part_terminal.at(uf.find(id.at(e.v)));
        append_link(inst_->terminal_index(a), inst_->terminal_index(b), e.cost, ei);
    }
}

double ContractionState::save_between(int ti, int tj) const {
    if (ti == tj) return 0.0;
    return save_->query(ti, tj);
}

double ContractionState::save_terminals(const std::vector<int>& terminal_ids) const {
    if (terminal_ids.size() < 2)
        throw std::invalid_argument("save: need at least two terminals");
    std::vector<int> idx;
    for (int t : terminal_ids) {
        int i = inst_->terminal_index(t);
        if (i < 0) throw std::invalid_argument("save: node is not a terminal");
        idx.push_back(i);
    }
    // grow one class; each step removes the bottleneck between the class and
    // the next terminal, which is the min over the members' pairwise values
    double total = 0.0;
    for (std::size_t i = 1; i < idx.size(); ++i) {
        double step = kInf;
        for (std::size_t j = 0; j < i; ++j)
            step = std::min(step, save_between(idx[j], idx[i]));
        total += step;
    }
    return total;
}

double ContractionState::save(const FullComponent& c) const {
    std::vector<int> ids = c.terminals;
    std::sort(ids.begin(), ids.end());
    return save_terminals(ids);
}

std::pair<int, int> ContractionState::save_tree_shape() const { return save_->shape(); }

double win_value(const ContractionState& state, const FullComponent& c, WinKind kind) {
    double s = state.save(c);
    double wa = s - c.cost;
    switch (kind) {
        case WinKind::abs: return wa;
        case WinKind::rel: return s / c.cost;
        case WinKind::loss:
            if (c.loss_cost <= kCostEps) return wa > kCostEps ? kInf : -kInf;
            return wa / c.loss_cost;
    }
    return 0.0;
}

bool promising(const ContractionState& state, const FullComponent& c, WinKind kind) {
    double s = state.save(c);
    if (kind == WinKind::rel) return s / c.cost > 1.0 + kCostEps;
    return s - c.cost > kCostEps;
}

namespace {

bool tie_better(double w, const FullComponent& c, double bw, const FullComponent& bc) {
    if (w != bw) return w > bw;
    if (c.cost != bc.cost) return c.cost < bc.cost;
    return c.terminals < bc.terminals;
}

void check_deadline(const GcfOptions& opts) {
    if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline)
        throw TimeoutError("greedy contraction: time budget exceeded");
}

SteinerTree assemble(const ContractionState& state, const GcfOptions& opts,
                     const std::vector<FullComponent>& chosen) {
    const Instance& inst = state.instance();
    if (!opts.mst_union_assembly) {
        std::set<int> terms(inst.terminals().begin(), inst.terminals().end());
        for (const auto& c : chosen) {
            terms.insert(c.terminals.begin(), c.terminals.end());
            terms.insert(c.inner_nodes.begin(), c.inner_nodes.end());
        }
        auto grown = tm(inst.with_terminals({terms.begin(), terms.end()}));
        // extra terminals may survive as leaves; prune against the real set
        return prune_to_steiner_tree(inst, grown.edge_indices);
    }
    std::set<int> edge_set;
    for (const auto& c : chosen) edge_set.insert(c.edge_indices.begin(), c.edge_indices.end());
    for (int ei : state.mst_edges()) {
        const MEdge& e = state.edges()[ei];
        if (e.origin == kOriginZero) continue;
        if (e.origin >= 0) {
            edge_set.insert(e.origin);
            continue;
        }
        auto path = expand_path(inst, state.oracle(), inst.terminals()[e.u],
                                inst.terminals()[e.v]);
        edge_set.insert(path.begin(), path.end());
    }
    return prune_to_steiner_tree(inst, {edge_set.begin(), edge_set.end()});
}

void trace_line(GcfResult& result, const GcfOptions& opts, const ContractionState& state,
                const FullComponent& c, double w) {
    if (!opts.trace) return;
    std::ostringstream os;
    os << "contract {";
    for (std::size_t i = 0; i < c.terminals.size(); ++i)
        os << (i ? "," : "") << c.terminals[i];
    os << "} win " << w << " mst " << state.mst_cost() << "\n";
    result.trace += os.str();
}

void apply_contraction(ContractionState& state, const GcfOptions& opts, FullComponent& c) {
    if (opts.loss_contract)
        state.loss_contract(c);
    else
        state.contract(c);
}

}  // namespace

GcfResult run_gcf(const Instance& inst, const DistanceOracle& oracle,
                  const ComponentSet& set, const GcfOptions& opts) {
    if (opts.loss_contract && opts.win != WinKind::loss)
        throw std::invalid_argument("gcf: loss contraction requires the loss win kind");
    std::vector<FullComponent> cands;
    for (const auto& c : set.components())
        if (c.terminals.size() >= 3 && !c.inner_terminal) cands.push_back(c);
    const bool need_loss = opts.win == WinKind::loss || opts.loss_contract;
    for (auto& c : cands) {
        if (need_loss) compute_loss(inst, c);
        if (opts.loss_contract) select_core_edges(inst, c, CoreMode::loss_complement);
    }

    ContractionState state(inst, oracle, opts.save);
    GcfResult result;

    if (opts.singlepass) {
        std::vector<std::pair<double, std::size_t>> order;
        for (std::size_t i = 0; i < cands.size(); ++i)
            order.push_back({win_value(state, cands[i], opts.win), i});
        std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
            return tie_better(a.first, cands[a.second], b.first, cands[b.second]);
        });
        for (auto [w0, i] : order) {
            check_deadline(opts);
            if (!promising(state, cands[i], opts.win)) continue;
            double w = win_value(state, cands[i], opts.win);
            result.chosen.push_back(cands[i]);
            result.wins.push_back(w);
            apply_contraction(state, opts, cands[i]);
            trace_line(result, opts, state, cands[i], w);
        }
    } else {
        while (true) {
            check_deadline(opts);
            std::vector<char> drop(cands.size(), 0);
            int best = -1;
            double best_w = 0.0;
            for (std::size_t i = 0; i < cands.size(); ++i) {
                if (!promising(state, cands[i], opts.win)) {
                    if (opts.reduce) drop[i] = 1;  // wins never increase
                    continue;
                }
                double w = win_value(state, cands[i], opts.win);
                if (best < 0 || tie_better(w, cands[i], best_w, cands[best])) {
                    best = static_cast<int>(i);
                    best_w = w;
                }
            }
            if (best >= 0) {
                result.chosen.push_back(cands[best]);
                result.wins.push_back(best_w);
                apply_contraction(state, opts, cands[best]);
                trace_line(result, opts, state, cands[best], best_w);
                drop[best] = 1;  // contracted; can never be promising again
            }
            std::vector<FullComponent> next;
            for (std::size_t i = 0; i < cands.size(); ++i)
                if (!drop[i]) next.push_back(std::move(cands[i]));
            cands = std::move(next);
            if (best < 0) break;
        }
    }
    result.tree = assemble(state, opts, result.chosen);
    return result;
}

std::optional<FullComponent> ondemand_best_3comp(const ContractionState& state,
                                                 double* win_out) {
    const Instance& inst = state.instance();
    const DistanceOracle& oracle = state.oracle();
    const auto& R = inst.terminals();
    const int r = inst.num_terminals();
    if (r < 3) return std::nullopt;

    struct Cand {
        double win;
        int v, i0, i1, i2;
    };
    std::vector<Cand> cands;
    for (int v = 0; v < inst.num_nodes(); ++v) {
        if (inst.is_terminal(v)) continue;
        int i0 = -1;
        double d0 = kInf;
        for (int i = 0; i < r; ++i) {
            double d = oracle.dist(R[i], v);
            if (d < d0 - kCostEps) {
                d0 = d;
                i0 = i;
            }
        }
        if (i0 < 0 || !std::isfinite(d0)) continue;
        int i1 = -1;
        double g1 = -kInf;
        for (int i = 0; i < r; ++i) {
            if (i == i0) continue;
            double g = state.save_between(i0, i) - oracle.dist(R[i], v);
            if (g > g1 + kCostEps) {
                g1 = g;
                i1 = i;
            }
        }
        if (i1 < 0) continue;
        double d1 = oracle.dist(R[i1], v);
        double s01 = state.save_between(i0, i1);
        int i2 = -1;
        double w2 = -kInf;
        for (int i = 0; i < r; ++i) {
            if (i == i0 || i == i1) continue;
            double s = s01 + std::min(state.save_between(i0, i), state.save_between(i1, i));
            double w = s - d0 - d1 - oracle.dist(R[i], v);
            if (w > w2 + kCostEps) {
                w2 = w;
                i2 = i;
            }
        }
        if (i2 < 0) continue;
        cands.push_back({w2, v, i0, i1, i2});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.win != b.win) return a.win > b.win;
        return a.v < b.v;
    });
    for (const Cand& c : cands) {
        if (c.win <= kCostEps) break;
        std::vector<int> edges;
        for (int i : {c.i0, c.i1, c.i2}) {
            auto p = expand_path(inst, oracle, R[i], c.v);
            edges.insert(edges.end(), p.begin(), p.end());
        }
        auto comp = canonical_component(inst, {R[c.i0], R[c.i1], R[c.i2]}, edges);
        if (!comp) continue;  // a foreign terminal sat on a path
        if (win_out) *win_out = c.win;
        return comp;
    }
    return std::nullopt;
}

GcfResult run_gcf_ondemand(const Instance& inst, const DistanceOracle& oracle,
                           const GcfOptions& opts) {
    if (opts.win != WinKind::abs)
        throw std::invalid_argument("gcf: on-demand generation requires the absolute win");
    if (opts.reduce || opts.singlepass || opts.loss_contract)
        throw std::invalid_argument("gcf: on-demand generation excludes reduce, "
                                    "singlepass, and loss contraction");
    ContractionState state(inst, oracle, opts.save);
    GcfResult result;
    while (true) {
        check_deadline(opts);
        double w = 0.0;
        auto c = ondemand_best_3comp(state, &w);
        if (!c) break;
        result.chosen.push_back(*c);
        result.wins.push_back(w);
        state.contract(*c);
        trace_line(result, opts, state, *c, w);
    }
    result.tree = assemble(state, opts, result.chosen);
    return result;
}

}  // namespace steiner
