#include "steiner/lp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace steiner {

namespace {

std::string cut_signature(const SerCut& cut) {
    std::ostringstream os;
    switch (cut.kind) {
        case SerCut::Kind::coverage: os << "c" << cut.terminal; break;
        case SerCut::Kind::subtour:
            os << "s";
            for (int t : cut.terminals) os << " " << t;
            break;
        case SerCut::Kind::clique:
            os << "q";
            for (const auto& m : cut.clique_members) {
                os << " |";
                for (int t : m) os << " " << t;
            }
            break;
    }
    return os.str();
}

void check_deadline(const SerOptions& opts) {
    if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline)
        throw TimeoutError("ser: time budget exceeded");
}

}  // namespace

SerModel::SerModel(std::vector<FullComponent> comps, std::vector<int> terminals)
    : comps_(std::move(comps)), terminals_(std::move(terminals)) {
    std::sort(terminals_.begin(), terminals_.end());
    for (auto& c : comps_) {
        std::sort(c.terminals.begin(), c.terminals.end());
        for (int t : c.terminals)
            if (!std::binary_search(terminals_.begin(), terminals_.end(), t))
                throw std::invalid_argument("ser: component terminal outside the set");
    }
}

bool SerModel::add_cut(SerCut cut) {
    if (cut.kind == SerCut::Kind::subtour) {
        std::sort(cut.terminals.begin(), cut.terminals.end());
        cut.terminals.erase(std::unique(cut.terminals.begin(), cut.terminals.end()),
                            cut.terminals.end());
        if (cut.terminals.size() < 2)
            throw std::invalid_argument("ser: subtour cut needs two terminals");
    }
    if (cut.kind == SerCut::Kind::clique)
        for (auto& m : cut.clique_members) std::sort(m.begin(), m.end());
    std::string sig = cut_signature(cut);
    if (std::find(signatures_.begin(), signatures_.end(), sig) != signatures_.end())
        return false;
    signatures_.push_back(std::move(sig));
    cuts_.push_back(std::move(cut));
    return true;
}

LpProblem SerModel::build_lp() const {
    const int n = static_cast<int>(comps_.size());
    LpProblem lp;
    lp.num_vars = n;
    lp.objective.resize(n);
    for (int i = 0; i < n; ++i) lp.objective[i] = comps_[i].cost;

    LpProblem::Row eq;
    eq.coeffs.resize(n);
    for (int i = 0; i < n; ++i)
        eq.coeffs[i] = static_cast<double>(comps_[i].terminals.size()) - 1.0;
    eq.sense = RowSense::eq;
    eq.rhs = static_cast<double>(terminals_.size()) - 1.0;
    lp.rows.push_back(std::move(eq));

    for (int i = 0; i < n; ++i) {
        LpProblem::Row ub;
        ub.coeffs.assign(n, 0.0);
        ub.coeffs[i] = 1.0;
        ub.sense = RowSense::le;
        ub.rhs = 1.0;
        lp.rows.push_back(std::move(ub));
    }

    for (const auto& cut : cuts_) {
        LpProblem::Row row;
        row.coeffs.assign(n, 0.0);
        switch (cut.kind) {
            case SerCut::Kind::coverage:
                for (int i = 0; i < n; ++i)
                    if (std::binary_search(comps_[i].terminals.begin(),
                                           comps_[i].terminals.end(), cut.terminal))
                        row.coeffs[i] = 1.0;
                row.sense = RowSense::ge;
                row.rhs = 1.0;
                break;
            case SerCut::Kind::subtour: {
                for (int i = 0; i < n; ++i) {
                    int inter = 0;
                    for (int t : comps_[i].terminals)
                        if (std::binary_search(cut.terminals.begin(), cut.terminals.end(), t))
                            ++inter;
                    if (inter >= 1) row.coeffs[i] = inter - 1.0;
                }
                row.sense = RowSense::le;
                row.rhs = static_cast<double>(cut.terminals.size()) - 1.0;
                break;
            }
            case SerCut::Kind::clique:
                for (int i = 0; i < n; ++i)
                    for (const auto& m : cut.clique_members)
                        if (comps_[i].terminals == m) {
                            row.coeffs[i] = 1.0;
                            break;
                        }
                row.sense = RowSense::le;
                row.rhs = 1.0;
                break;
        }
        lp.rows.push_back(std::move(row));
    }

    if (objective_bound) {
        LpProblem::Row bound;
        bound.coeffs = lp.objective;
        bound.sense = RowSense::le;
        bound.rhs = *objective_bound;
        lp.rows.push_back(std::move(bound));
    }
    return lp;
}

LpSolution lp_solve(const SerModel& model) {
    auto res = lp_minimize(model.build_lp());
    LpSolution sol;
    if (res.status == LpResult::Status::infeasible) {
        sol.infeasible = true;
        return sol;
    }
    sol.x = std::move(res.x);
    sol.objective = res.objective;
    const auto& comps = model.components();
    for (std::size_t i = 0; i < comps.size(); ++i)
        if (sol.x[i] > kLpTau) sol.support.push_back(static_cast<int>(i));
    sol.coverage.assign(model.terminals().size(), 0.0);
    for (std::size_t r = 0; r < model.terminals().size(); ++r)
        for (std::size_t i = 0; i < comps.size(); ++i)
            if (std::binary_search(comps[i].terminals.begin(), comps[i].terminals.end(),
                                   model.terminals()[r]))
                sol.coverage[r] += sol.x[i];
    return sol;
}

std::vector<SerCut> separate(const SerModel& model, const LpSolution& sol,
                             const SerOptions& opts, int k) {
    const auto& comps = model.components();
    const auto& R = model.terminals();
    const int r = static_cast<int>(R.size());
    for (double y : sol.coverage)
        if (y < 1.0 - kLpTau)
            throw std::invalid_argument("ser: separation requires full coverage");

    std::vector<SerCut> found;
    auto pos_of = [&](int t) {
        return static_cast<int>(std::lower_bound(R.begin(), R.end(), t) - R.begin());
    };

    if (opts.consep) {
        UnionFind uf(r);
        for (int i : sol.support)
            for (std::size_t j = 1; j < comps[i].terminals.size(); ++j)
                uf.unite(pos_of(comps[i].terminals[0]), pos_of(comps[i].terminals[j]));
        std::map<int, std::vector<int>> parts;
        for (int p = 0; p < r; ++p) parts[uf.find(p)].push_back(R[p]);
        if (parts.size() > 1) {
            for (auto& [root, members] : parts)
                if (members.size() >= 2) {
                    SerCut cut;
                    cut.kind = SerCut::Kind::subtour;
                    cut.terminals = members;
                    found.push_back(std::move(cut));
                }
            return found;  // connectivity round; flows wait for the next one
        }
    }

    // star network: s=0, t=1, terminal p -> 2+p, component i -> per-support z
    double excess = 0.0;  // sum y_r - |R|
    for (double y : sol.coverage) excess += y - 1.0;
    const int base = 2 + r;
    std::set<std::vector<int>> seen;
    for (int target = 0; target < r; ++target) {
        FlowNetwork net(base + static_cast<int>(sol.support.size()) + 1);
        const int super = base + static_cast<int>(sol.support.size());
        for (std::size_t zi = 0; zi < sol.support.size(); ++zi) {
            int i = sol.support[zi];
            double cap = sol.x[i];
            int root = pos_of(comps[i].terminals.front());
            net.add_arc(0, 2 + root, cap);
            net.add_arc(2 + root, base + static_cast<int>(zi), cap);
            for (std::size_t j = 1; j < comps[i].terminals.size(); ++j)
                net.add_arc(base + static_cast<int>(zi), 2 + pos_of(comps[i].terminals[j]),
                            cap);
        }
        for (int p = 0; p < r; ++p)
            net.add_arc(2 + p, 1, std::max(0.0, sol.coverage[p] - 1.0));
        net.add_arc(1, super, kInf);
        net.add_arc(2 + target, super, kInf);
        auto cut = net.max_flow(0, super);
        if (cut.value < excess + 1.0 - 1e-6) {
            std::vector<int> rprime;
            for (int p = 0; p < r; ++p)
                if (cut.sink_side[2 + p]) rprime.push_back(R[p]);
            if (rprime.size() >= 2 && seen.insert(rprime).second) {
                SerCut c;
                c.kind = SerCut::Kind::subtour;
                c.terminals = std::move(rprime);
                found.push_back(std::move(c));
            }
        }
    }

    if (opts.stronger) {
        // conflict graph over the support: adjacent iff two shared terminals
        const auto& sup = sol.support;
        const int m = static_cast<int>(sup.size());
        std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b) {
                int shared = 0;
                for (int t : comps[sup[a]].terminals)
                    if (std::binary_search(comps[sup[b]].terminals.begin(),
                                           comps[sup[b]].terminals.end(), t))
                        ++shared;
                adj[a][b] = adj[b][a] = shared >= 2;
            }
        std::set<std::vector<int>> emitted;
        std::vector<int> clique;
        auto grow = [&](auto&& self, int from, double sum) -> void {
            if (clique.size() >= 2 && sum > 1.0 + 1e-6) {
                std::vector<int> key;
                for (int a : clique) key.push_back(sup[a]);
                if (emitted.insert(key).second) {
                    SerCut c;
                    c.kind = SerCut::Kind::clique;
                    for (int a : clique) c.clique_members.push_back(comps[sup[a]].terminals);
                    found.push_back(std::move(c));
                }
            }
            if (static_cast<int>(clique.size()) >= k + 1) return;
            for (int b = from; b < m; ++b) {
                bool ok = true;
                for (int a : clique)
                    if (!adj[a][b]) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                clique.push_back(b);
                self(self, b + 1, sum + sol.x[sup[b]]);
                clique.pop_back();
            }
        };
        grow(grow, 0, 0.0);
    }
    return found;
}

LpSolution solve_ser(SerModel& model, const SerOptions& opts, int k) {
    if (model.components().empty()) throw std::invalid_argument("ser: no components");
    if (opts.presep_initial)
        for (int t : model.terminals()) {
            SerCut c;
            c.kind = SerCut::Kind::coverage;
            c.terminal = t;
            model.add_cut(std::move(c));
        }
    while (true) {
        check_deadline(opts);
        LpSolution sol = lp_solve(model);
        if (sol.infeasible) {
            if (model.objective_bound) return sol;
            throw std::runtime_error("ser: relaxation infeasible (set not connectable)");
        }
        bool added = false;
        if (!opts.presep_initial) {
            for (std::size_t p = 0; p < model.terminals().size(); ++p)
                if (sol.coverage[p] < 1.0 - kLpTau) {
                    SerCut c;
                    c.kind = SerCut::Kind::coverage;
                    c.terminal = model.terminals()[p];
                    added |= model.add_cut(std::move(c));
                }
            if (added) continue;
        }
        for (auto& cut : separate(model, sol, opts, k)) added |= model.add_cut(std::move(cut));
        if (!added) return sol;
    }
}

LpSolution solve_ser(const Instance& inst, const ComponentSet& set, const SerOptions& opts) {
    std::vector<FullComponent> comps;
    for (const auto& c : set.components())
        if (!c.inner_terminal) comps.push_back(c);
    SerModel model(std::move(comps), inst.terminals());
    if (opts.bound)
        model.objective_bound = prune_to_steiner_tree(inst, tm(inst).edge_indices).cost;
    return solve_ser(model, opts, set.k());
}

PruneOutcome prune_integral_leaves(const SerModel& model, const LpSolution& sol) {
    const auto& comps = model.components();
    PruneOutcome out;
    out.remaining_terminals = model.terminals();
    out.residual = sol;
    auto& x = out.residual.x;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < comps.size() && !changed; ++i) {
            if (x[i] < 1.0 - 1e-6) continue;
            std::set<int> others;
            for (std::size_t j = 0; j < comps.size(); ++j)
                if (j != i && x[j] > kLpTau)
                    others.insert(comps[j].terminals.begin(), comps[j].terminals.end());
            std::vector<int> shared;
            for (int t : comps[i].terminals)
                if (others.count(t)) shared.push_back(t);
            if (shared.size() != 1) continue;
            x[i] = 0.0;
            out.committed.push_back(comps[i]);
            for (int t : comps[i].terminals)
                if (t != shared[0])
                    out.remaining_terminals.erase(
                        std::find(out.remaining_terminals.begin(),
                                  out.remaining_terminals.end(), t));
            changed = true;
        }
    }
    // lone integral component covering everything left: commit it outright
    {
        int lone = -1;
        bool ok = true;
        for (std::size_t i = 0; i < comps.size() && ok; ++i) {
            if (x[i] >= 1.0 - 1e-6) {
                if (lone >= 0) ok = false;
                lone = static_cast<int>(i);
            } else if (x[i] > kLpTau) {
                ok = false;
            }
        }
        if (ok && lone >= 0 && comps[lone].terminals == out.remaining_terminals) {
            x[lone] = 0.0;
            out.committed.push_back(comps[lone]);
            out.remaining_terminals = {comps[lone].terminals.front()};
        }
    }
    out.residual.support.clear();
    out.residual.objective = 0.0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (x[i] > kLpTau) out.residual.support.push_back(static_cast<int>(i));
        out.residual.objective += comps[i].cost * x[i];
    }
    out.residual.coverage.assign(out.remaining_terminals.size(), 0.0);
    for (std::size_t p = 0; p < out.remaining_terminals.size(); ++p)
        for (std::size_t i = 0; i < comps.size(); ++i)
            if (std::binary_search(comps[i].terminals.begin(), comps[i].terminals.end(),
                                   out.remaining_terminals[p]))
                out.residual.coverage[p] += x[i];
    return out;
}

namespace {

// terminal merging for the rounding loop: every terminal of the committed
// component collapses onto its lowest id
struct Remap {
    std::map<int, int> to;  // only non-identity entries

    int operator()(int t) const {
        auto it = to.find(t);
        return it == to.end() ? t : it->second;
    }
    void absorb(const std::vector<int>& group) {
        int rep = *std::min_element(group.begin(), group.end());
        rep = (*this)(rep);
        for (int t : group) {
            int cur = (*this)(t);
            if (cur != rep) to[cur] = rep;
        }
        // flatten chains
        for (auto& [from, target] : to)
            while (to.count(target)) target = to.at(target);
    }
};

std::vector<int> remap_set(const std::vector<int>& ts, const Remap& remap) {
    std::vector<int> out;
    for (int t : ts) out.push_back(remap(t));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

SteinerTree round_iterative(const Instance& inst, const ComponentSet& set,
                            const RoundOptions& opts) {
    std::vector<FullComponent> comps;
    for (const auto& c : set.components())
        if (!c.inner_terminal) comps.push_back(c);
    std::optional<double> bound;
    if (opts.ser.bound)
        bound = prune_to_steiner_tree(inst, tm(inst).edge_indices).cost;

    Remap remap;
    std::vector<int> terminals = inst.terminals();
    std::vector<SerCut> pool;
    std::vector<FullComponent> committed;
    std::mt19937_64 rng(opts.seed);

    auto commit = [&](const FullComponent& c) {
        committed.push_back(c);
        remap.absorb(c.terminals);
    };
    auto apply_merges = [&]() {
        terminals = remap_set(terminals, remap);
        std::vector<FullComponent> next;
        for (auto& c : comps) {
            c.terminals = remap_set(c.terminals, remap);
            if (c.terminals.size() >= 2) next.push_back(std::move(c));
        }
        comps = std::move(next);
        std::vector<SerCut> kept;
        for (auto cut : pool) {
            if (cut.kind == SerCut::Kind::coverage) {
                cut.terminal = remap(cut.terminal);
            } else if (cut.kind == SerCut::Kind::subtour) {
                cut.terminals = remap_set(cut.terminals, remap);
                if (cut.terminals.size() < 2) continue;
            } else {
                bool valid = true;
                for (auto& m : cut.clique_members) {
                    m = remap_set(m, remap);
                    if (m.size() < 2) valid = false;
                }
                for (std::size_t a = 0; a < cut.clique_members.size() && valid; ++a)
                    for (std::size_t b = a + 1; b < cut.clique_members.size() && valid; ++b) {
                        int shared = 0;
                        for (int t : cut.clique_members[a])
                            if (std::binary_search(cut.clique_members[b].begin(),
                                                   cut.clique_members[b].end(), t))
                                ++shared;
                        if (shared < 2) valid = false;  // members may now coexist
                    }
                if (!valid) continue;
            }
            kept.push_back(std::move(cut));
        }
        pool = std::move(kept);
    };

    while (terminals.size() > 1) {
        if (comps.empty())
            throw std::runtime_error("rounding: residual hypergraph not connectable");
        SerModel model(comps, terminals);
        model.objective_bound = bound;
        for (const auto& cut : pool) model.add_cut(cut);
        LpSolution sol = solve_ser(model, opts.ser, opts.k);
        if (sol.infeasible)
            return prune_to_steiner_tree(inst, tm(inst).edge_indices);
        pool = model.cuts();

        if (opts.prune) {
            auto pruned = prune_integral_leaves(model, sol);
            if (!pruned.committed.empty()) {
                for (const auto& c : pruned.committed) commit(c);
                apply_merges();
                continue;
            }
        }
        if (sol.support.empty())
            throw std::logic_error("rounding: empty support on a feasible solution");
        int pick = -1;
        if (opts.deterministic) {
            for (int i : sol.support)
                if (pick < 0 || sol.x[i] > sol.x[pick] + kLpTau ||
                    (sol.x[i] > sol.x[pick] - kLpTau &&
                     model.components()[i].cost < model.components()[pick].cost))
                    pick = i;
        } else {
            std::vector<double> weights;
            for (int i : sol.support) weights.push_back(sol.x[i]);
            std::discrete_distribution<int> dist(weights.begin(), weights.end());
            pick = sol.support[dist(rng)];
        }
        commit(model.components()[pick]);
        apply_merges();
    }

    std::set<int> edge_set;
    for (const auto& c : committed)
        edge_set.insert(c.edge_indices.begin(), c.edge_indices.end());
    return prune_to_steiner_tree(inst, {edge_set.begin(), edge_set.end()});
}

}  // namespace steiner
