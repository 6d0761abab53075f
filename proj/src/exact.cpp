#include "steiner/exact.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <unordered_map>

namespace steiner {

DreyfusWagner::DreyfusWagner(const Instance& inst, const DistanceOracle& oracle, int limit,
                             bool force, std::size_t max_table_bytes)
    : inst_(inst), oracle_(oracle), limit_(limit) {
    const int r = inst.num_terminals();
    const int n = inst.num_nodes();
    if (limit_ < 2) throw std::invalid_argument("dw: limit must be at least 2");
    if (limit_ > r) limit_ = r;
    if (r > 24 && limit_ >= 6 && !force)
        throw std::runtime_error("dw: table would be huge (>24 terminals, limit >= 6); "
                                 "pass force to override");
    if (r > 31) throw std::runtime_error("dw: more than 31 terminals unsupported");

    // states have popcount <= limit-1, enumerated in increasing size
    for (int size = 1; size < limit_; ++size) {
        std::vector<int> pick(size);
        for (int i = 0; i < size; ++i) pick[i] = i;
        while (true) {
            std::uint32_t mask = 0;
            for (int i : pick) mask |= 1u << i;
            masks_.push_back(mask);
            int j = size - 1;
            while (j >= 0 && pick[j] == r - size + j) --j;
            if (j < 0) break;
            ++pick[j];
            for (int i = j + 1; i < size; ++i) pick[i] = pick[i - 1] + 1;
        }
    }
    std::size_t bytes = masks_.size() * static_cast<std::size_t>(n) * (sizeof(double) + 8);
    if (bytes > max_table_bytes)
        throw std::runtime_error("dw: projected table size exceeds the caller budget");
    slot_lookup_.reserve(masks_.size() * 2);
    for (std::size_t i = 0; i < masks_.size(); ++i)
        slot_lookup_[masks_[i]] = static_cast<int>(i);

    cost_.assign(masks_.size(), {});
    via_node_.assign(masks_.size(), {});
    split_.assign(masks_.size(), {});

    std::vector<double> tmp(n);
    std::vector<std::uint32_t> tmp_split(n);
    for (std::size_t si = 0; si < masks_.size(); ++si) {
        std::uint32_t mask = masks_[si];
        auto& S = cost_[si];
        S.assign(n, kInf);
        via_node_[si].assign(n, -1);
        split_[si].assign(n, 0);
        if (std::popcount(mask) == 1) {
            int t = inst.terminals()[std::countr_zero(mask)];
            for (int v = 0; v < n; ++v) S[v] = oracle_.dist(t, v);
            continue;
        }
        // split step: submasks containing the lowest set bit
        std::uint32_t low = mask & -mask;
        std::fill(tmp.begin(), tmp.end(), kInf);
        for (std::uint32_t sub = (mask - 1) & mask; sub; sub = (sub - 1) & mask) {
            if (!(sub & low)) continue;
            std::uint32_t rest = mask ^ sub;
            const auto& a = cost_[slot_lookup_.at(sub)];
            const auto& b = cost_[slot_lookup_.at(rest)];
            for (int v = 0; v < n; ++v) {
                double c = a[v] + b[v];
                if (c < tmp[v] - kCostEps) {
                    tmp[v] = c;
                    tmp_split[v] = sub;
                }
            }
        }
        // close step: attach the split point by a shortest path
        for (int v = 0; v < n; ++v) {
            for (int u = 0; u < n; ++u) {
                double c = tmp[u] + oracle_.dist(u, v);
                if (c < S[v] - kCostEps) {
                    S[v] = c;
                    via_node_[si][v] = u;
                }
            }
        }
        split_[si] = tmp_split;
    }
}

void DreyfusWagner::add_path_edges(int u, int v, std::vector<int>& edges) const {
    if (u == v) return;
    auto path = oracle_.path(u, v);
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        for (auto [w, ei] : inst_.neighbors(path[i]))
            if (w == path[i + 1]) {
                edges.push_back(ei);
                break;
            }
}

void DreyfusWagner::collect_tree(std::uint32_t mask, int v, std::vector<int>& edges) const {
    if (std::popcount(mask) == 1) {
        add_path_edges(inst_.terminals()[std::countr_zero(mask)], v, edges);
        return;
    }
    int si = slot_lookup_.at(mask);
    int u = via_node_[si][v];
    add_path_edges(u, v, edges);
    std::uint32_t sub = split_[si][u];
    collect_tree(sub, u, edges);
    collect_tree(mask ^ sub, u, edges);
}

double DreyfusWagner::cost_for(const std::vector<int>& terminal_subset) const {
    if (terminal_subset.size() < 2 || static_cast<int>(terminal_subset.size()) > limit_)
        throw std::invalid_argument("dw: subset size out of range");
    std::uint32_t mask = 0;
    int root = -1, root_index = inst_.num_terminals();
    for (int t : terminal_subset) {
        int i = inst_.terminal_index(t);
        if (i < 0) throw std::invalid_argument("dw: node is not a terminal");
        mask |= 1u << i;
        if (i < root_index) { root_index = i; root = t; }
    }
    return cost_[slot_lookup_.at(mask & ~(1u << root_index))][root];
}

DwResult DreyfusWagner::tree_for(const std::vector<int>& terminal_subset) const {
    DwResult result;
    result.cost = cost_for(terminal_subset);
    std::uint32_t mask = 0;
    int root = -1, root_index = inst_.num_terminals();
    for (int t : terminal_subset) {
        int i = inst_.terminal_index(t);
        mask |= 1u << i;
        if (i < root_index) { root_index = i; root = t; }
    }
    collect_tree(mask & ~(1u << root_index), root, result.edge_indices);
    std::sort(result.edge_indices.begin(), result.edge_indices.end());
    result.edge_indices.erase(
        std::unique(result.edge_indices.begin(), result.edge_indices.end()),
        result.edge_indices.end());
    return result;
}

DwResult DreyfusWagner::solve(const Instance& inst, const DistanceOracle& oracle) {
    DreyfusWagner dw(inst, oracle, inst.num_terminals(), /*force=*/true);
    return dw.tree_for(inst.terminals());
}

}  // namespace steiner
