#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>

#include "steiner/components.hpp"
#include "support/testutil.hpp"

using namespace steiner;

namespace {

Instance star() {
    return Instance(4, {{0, 3, 1}, {1, 3, 1}, {2, 3, 1}}, {0, 1, 2});
}

std::map<std::vector<int>, double> cost_map(const ComponentSet& set) {
    std::map<std::vector<int>, double> m;
    for (const auto& c : set.components()) m[c.terminals] = c.cost;
    return m;
}

// closure of the terminal set under plain distances
WeightedGraph terminal_metric(const Instance& inst, const DistanceOracle& oracle) {
    return metric_closure(oracle, inst.terminals());
}

}  // namespace

TEST_CASE("star components, k=3") {
    auto inst = star();
    auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
    auto set = gen_all_naive(inst, oracle, 3);
    auto m = cost_map(set);
    REQUIRE(m.size() == 4);
    CHECK(m.at({0, 1}) == 2);
    CHECK(m.at({0, 2}) == 2);
    CHECK(m.at({1, 2}) == 2);
    CHECK(m.at({0, 1, 2}) == 3);
    const auto* c3 = set.find({0, 1, 2});
    REQUIRE(c3 != nullptr);
    CHECK(c3->inner_nodes == std::vector<int>{3});

    CHECK(cost_map(gen_all_smart(inst, oracle, 3)) == m);
    CHECK(cost_map(gen_all_dw(inst, 3)) == m);
    auto vp = voronoi_regions(inst);
    CHECK(cost_map(gen_voronoi(inst, oracle, vp, 3)) == m);
}

TEST_CASE("k=2 gives exactly the valid terminal pair paths") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        auto inst = testutil::random_instance(rng, 12, 14, 4);
        auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        auto set = gen_all_naive(inst, oracle, 2);
        for (const auto& c : set.components()) {
            REQUIRE(c.terminals.size() == 2);
            CHECK(c.cost == doctest::Approx(oracle.dist(c.terminals[0], c.terminals[1])));
        }
        int valid_pairs = 0;
        const auto& R = inst.terminals();
        for (std::size_t a = 0; a < R.size(); ++a)
            for (std::size_t b = a + 1; b < R.size(); ++b)
                if (oracle.valid(R[a], R[b])) ++valid_pairs;
        CHECK(static_cast<int>(set.components().size()) == valid_pairs);
    }
}

TEST_CASE("no nonterminals leaves only 2-components under smart") {
    Instance inst(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 5}}, {0, 1, 2});
    auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
    auto set = gen_all_smart(inst, oracle, 3);
    for (const auto& c : set.components()) CHECK(c.terminals.size() == 2);
}

TEST_CASE("naive, dw agree for k=3; voronoi and smart never undercut") {
    std::mt19937 rng(20260823);
    for (int trial = 0; trial < 25; ++trial) {
        auto inst =
            testutil::random_real_instance(rng, 13, 14, 4 + static_cast<int>(rng() % 3));
        auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        auto naive = cost_map(gen_all_naive(inst, oracle, 3));
        auto dw = cost_map(gen_all_dw(inst, 3));
        REQUIRE(naive.size() == dw.size());
        for (const auto& [terms, cost] : naive) {
            REQUIRE(dw.count(terms));
            CHECK(cost == doctest::Approx(dw.at(terms)));
        }
        auto vp = voronoi_regions(inst);
        auto voro = cost_map(gen_voronoi(inst, oracle, vp, 3));
        for (const auto& [terms, cost] : voro) {
            REQUIRE(naive.count(terms));
            CHECK(cost >= naive.at(terms) - 1e-9);
        }
        auto smart_set = gen_all_smart(inst, oracle, 3);
        for (const auto& c : smart_set.components()) {
            if (c.terminals.size() == 2) continue;
            auto it = naive.find(c.terminals);
            if (it != naive.end()) CHECK(c.cost >= it->second - 1e-9);
        }
    }
}

TEST_CASE("generated components satisfy shape invariants") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 15; ++trial) {
        auto inst = testutil::random_instance(rng, 12, 14, 5);
        auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        for (auto& set : {gen_all_naive(inst, oracle, 3), gen_all_dw(inst, 3)}) {
            for (const auto& c : set.components()) {
                CHECK_FALSE(c.inner_terminal);
                std::map<int, int> degree;
                double cost = 0;
                UnionFind uf(inst.num_nodes());
                for (int ei : c.edge_indices) {
                    const Edge& e = inst.edges()[ei];
                    ++degree[e.u];
                    ++degree[e.v];
                    cost += e.cost;
                    CHECK(uf.unite(e.u, e.v));  // acyclic
                }
                // the recorded expansion never exceeds the closure value
                CHECK(cost <= c.cost + 1e-9);
                for (int t : c.terminals) CHECK(degree[t] == 1);
                for (int v : c.inner_nodes) {
                    CHECK_FALSE(inst.is_terminal(v));
                    CHECK(degree[v] >= 2);
                }
            }
        }
    }
}

TEST_CASE("loss of the unit star is one edge") {
    auto inst = star();
    auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
    auto set = gen_all_naive(inst, oracle, 3);
    FullComponent c = *set.find({0, 1, 2});
    compute_loss(inst, c);
    CHECK(c.loss_edges.size() == 1);
    CHECK(c.loss_cost == 1);
}

TEST_CASE("loss of a skewed star is its cheapest spoke") {
    // spokes 1, 2, 3 from center node 3
    Instance inst(4, {{0, 3, 1}, {1, 3, 2}, {2, 3, 3}}, {0, 1, 2});
    auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
    auto set = gen_all_naive(inst, oracle, 3);
    FullComponent c = *set.find({0, 1, 2});
    compute_loss(inst, c);
    REQUIRE(c.loss_edges.size() == 1);
    CHECK(inst.edges()[c.loss_edges[0]].cost == 1);
    CHECK(c.loss_cost == 1);
}

TEST_CASE("2-components have zero-cost loss only when direct") {
    Instance inst(3, {{0, 1, 2}, {1, 2, 3}}, {0, 2});
    auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
    auto set = gen_all_naive(inst, oracle, 2);
    FullComponent c = *set.find({0, 2});
    compute_loss(inst, c);
    // the path interior node hangs onto the cheaper side
    CHECK(c.loss_cost == 2);
    select_core_edges(inst, c, CoreMode::loss_complement);
    REQUIRE(c.core_edges.size() == 1);
    CHECK(inst.edges()[c.core_edges[0]].cost == 3);
}

TEST_CASE("loss facts on random components") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        auto inst = testutil::random_instance(rng, 12, 13, 4);
        auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        auto set = gen_all_naive(inst, oracle, 4);
        for (auto c : set.components()) {
            compute_loss(inst, c);
            CHECK(c.loss_cost <= c.cost + 1e-9);
            CHECK(c.loss_edges.size() == c.inner_nodes.size());
            // every loss part holds exactly one terminal
            std::map<int, int> id;
            int m = 0;
            for (int t : c.terminals) id[t] = m++;
            for (int v : c.inner_nodes) id[v] = m++;
            UnionFind uf(m);
            for (int ei : c.loss_edges)
                uf.unite(id[inst.edges()[ei].u], id[inst.edges()[ei].v]);
            std::map<int, int> terminals_in_part;
            for (int t : c.terminals) ++terminals_in_part[uf.find(id[t])];
            for (int v : c.inner_nodes) terminals_in_part[uf.find(id[v])];
            for (auto [part, count] : terminals_in_part) CHECK(count == 1);
        }
    }
}

TEST_CASE("loss contraction identity against independent MSTs") {
    std::mt19937 rng(13);
    int checked = 0;
    for (int trial = 0; trial < 25; ++trial) {
        auto inst = testutil::random_instance(rng, 12, 13, 5);
        auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        auto M = terminal_metric(inst, oracle);
        double mst_m = mst(M).cost;
        auto set = gen_all_naive(inst, oracle, 3);
        for (auto c : set.components()) {
            compute_loss(inst, c);
            // M/C: free links between the component's terminals
            WeightedGraph mc = M;
            for (std::size_t i = 1; i < c.terminals.size(); ++i)
                mc.edges.push_back({inst.terminal_index(c.terminals[0]),
                                    inst.terminal_index(c.terminals[i]), 0.0});
            double mst_mc = mst(mc).cost;
            CHECK(mst_mc <= mst_m + 1e-9);
            // M/Loss(C): non-loss edges become terminal links, mapped through
            // the loss parts, keeping their own costs
            std::map<int, int> id;
            int m = 0;
            for (int t : c.terminals) id[t] = m++;
            for (int v : c.inner_nodes) id[v] = m++;
            UnionFind uf(m);
            for (int ei : c.loss_edges)
                uf.unite(id[inst.edges()[ei].u], id[inst.edges()[ei].v]);
            std::map<int, int> part_terminal;
            for (int t : c.terminals) part_terminal[uf.find(id[t])] = t;
            select_core_edges(inst, c, CoreMode::loss_complement);
            WeightedGraph ml = M;
            for (int ei : c.core_edges) {
                const Edge& e = inst.edges()[ei];
                int a = part_terminal.at(uf.find(id[e.u]));
                int b = part_terminal.at(uf.find(id[e.v]));
                ml.edges.push_back({inst.terminal_index(a), inst.terminal_index(b), e.cost});
            }
            double mst_ml = mst(ml).cost;
            // MST(M/C) together with the mapped non-loss edges spans the
            // loss-contracted graph, so this holds with equality whenever the
            // non-loss edges are not undercut by direct terminal links
            CHECK(mst_ml <= mst_mc + c.cost - c.loss_cost + 1e-9);
            CHECK(mst_ml >= mst_mc - 1e-9);
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("loss contraction equality when no terminal link undercuts the core") {
    // star component: center 3, unit spokes; every terminal pair sits at
    // distance 2 so the mapped non-loss edges are strictly cheapest
    Instance inst(4, {{0, 3, 1}, {1, 3, 1}, {2, 3, 1}}, {0, 1, 2});
    auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
    auto M = terminal_metric(inst, oracle);
    auto set = gen_all_naive(inst, oracle, 3);
    auto* c3 = set.find({0, 1, 2});
    REQUIRE(c3 != nullptr);
    FullComponent c = *c3;
    compute_loss(inst, c);
    WeightedGraph mc = M;
    mc.edges.push_back({0, 1, 0.0});
    mc.edges.push_back({0, 2, 0.0});
    double mst_mc = mst(mc).cost;
    CHECK(mst_mc == 0.0);
    select_core_edges(inst, c, CoreMode::loss_complement);
    // loss part of the center is the lowest-index spoke; non-loss spokes map
    // to links from that terminal at their own cost
    WeightedGraph ml = M;
    for (int ei : c.core_edges) {
        const Edge& e = inst.edges()[ei];
        int t = (e.u == 3) ? e.v : e.u;
        ml.edges.push_back({0, t, e.cost});
    }
    double mst_ml = mst(ml).cost;
    CHECK(mst_ml == doctest::Approx(mst_mc + c.cost - c.loss_cost));
    CHECK(mst_ml == doctest::Approx(2.0));
}

TEST_CASE("core edges always separate the terminals") {
    std::mt19937 rng(55);
    for (int trial = 0; trial < 15; ++trial) {
        auto inst = testutil::random_instance(rng, 12, 13, 4);
        auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        auto set = gen_all_naive(inst, oracle, 4);
        for (auto c : set.components()) {
            for (int variant = 0; variant < 3; ++variant) {
                if (variant == 0)
                    select_core_edges(inst, c, CoreMode::loss_complement);
                else
                    select_core_edges(inst, c, CoreMode::random, 1000 + variant);
                CHECK(c.core_edges.size() == c.terminals.size() - 1);
                std::set<int> core(c.core_edges.begin(), c.core_edges.end());
                UnionFind uf(inst.num_nodes());
                for (int ei : c.edge_indices)
                    if (!core.count(ei)) uf.unite(inst.edges()[ei].u, inst.edges()[ei].v);
                for (std::size_t a = 0; a < c.terminals.size(); ++a)
                    for (std::size_t b = a + 1; b < c.terminals.size(); ++b)
                        CHECK(uf.find(c.terminals[a]) != uf.find(c.terminals[b]));
            }
        }
    }
}

TEST_CASE("expansion is cheap and shared") {
    Instance inst(3, {{0, 1, 1}, {1, 2, 1}}, {0, 2});
    auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
    CHECK(expand_path(inst, oracle, 0, 2) == std::vector<int>{0, 1});
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        auto ri = testutil::random_instance(rng, 15, 20, 5);
        auto ro = shortest_paths(ri, DistMode::apsp, SpPolicy::prefer);
        const auto& R = ri.terminals();
        for (std::size_t a = 0; a < R.size(); ++a)
            for (std::size_t b = a + 1; b < R.size(); ++b) {
                double total = 0;
                for (int ei : expand_path(ri, ro, R[a], R[b])) total += ri.edges()[ei].cost;
                CHECK(total == doctest::Approx(ro.dist(R[a], R[b])));
            }
    }
}

TEST_CASE("component set dedup and dump") {
    auto inst = star();
    ComponentSet set(3, "test");
    FullComponent a;
    a.terminals = {0, 1};
    a.edge_indices = {0, 1};
    a.cost = 2;
    FullComponent b = a;
    b.cost = 5;
    set.add(b);
    set.add(a);  // cheaper replaces
    REQUIRE(set.components().size() == 1);
    CHECK(set.components()[0].cost == 2);
    auto text = set.dump(inst);
    CHECK(text.find("1 2 | 2 |") != std::string::npos);
}
