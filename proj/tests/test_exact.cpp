#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "steiner/exact.hpp"
#include "steiner/two_approx.hpp"
#include "support/testutil.hpp"

using namespace steiner;

TEST_CASE("two terminals reduce to a shortest path") {
    Instance inst(4, {{0, 1, 3}, {0, 2, 1}, {2, 3, 1}, {3, 1, 1}}, {0, 1});
    auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
    auto result = DreyfusWagner::solve(inst, oracle);
    CHECK(result.cost == 3);
    // direct edge ties with the 3-hop route; lowest predecessor index wins
    CHECK(result.edge_indices.size() == 1);
}

TEST_CASE("star optimum") {
    Instance inst(4, {{0, 3, 1}, {1, 3, 1}, {2, 3, 1}}, {0, 1, 2});
    auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
    auto result = DreyfusWagner::solve(inst, oracle);
    CHECK(result.cost == 3);
    CHECK(result.edge_indices == std::vector<int>{0, 1, 2});
}

TEST_CASE("full mode equals brute force on small instances") {
    std::mt19937 rng(20260823);
    for (int trial = 0; trial < 80; ++trial) {
        int n = 6 + static_cast<int>(rng() % 5);  // <= 10 nodes
        auto inst = testutil::random_instance(rng, n, n, 2 + static_cast<int>(rng() % 4));
        auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        auto result = DreyfusWagner::solve(inst, oracle);
        double opt = testutil::brute_force_steiner(inst);
        CHECK(result.cost == doctest::Approx(opt));
        // the returned edges really form a spanning structure of that cost
        auto tree = prune_to_steiner_tree(inst, result.edge_indices);
        CHECK(tree.cost == doctest::Approx(opt));
        CHECK(check_steiner_tree(inst, tree).empty());
    }
}

TEST_CASE("restricted tables answer every small subset optimally") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        auto inst = testutil::random_instance(rng, 10, 10, 5);
        auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        DreyfusWagner dw(inst, oracle, 3);
        auto R = inst.terminals();
        for (size_t a = 0; a < R.size(); ++a)
            for (size_t b = a + 1; b < R.size(); ++b) {
                CHECK(dw.cost_for({R[a], R[b]}) ==
                      doctest::Approx(oracle.dist(R[a], R[b])));
                for (size_t c = b + 1; c < R.size(); ++c) {
                    auto sub = inst.with_terminals({R[a], R[b], R[c]});
                    double opt = testutil::brute_force_steiner(sub);
                    CHECK(dw.cost_for({R[a], R[b], R[c]}) == doctest::Approx(opt));
                }
            }
        CHECK_THROWS(dw.cost_for({R[0], R[1], R[2], R[3]}));  // beyond the limit
        CHECK_THROWS(dw.cost_for({R[0]}));
        for (int v = 0; v < inst.num_nodes(); ++v)
            if (!inst.is_terminal(v)) {
                CHECK_THROWS(dw.cost_for({v, R[0]}));  // nonterminal in the subset
                break;
            }
    }
}

TEST_CASE("trees are deterministic") {
    std::mt19937 rng(17);
    auto inst = testutil::random_instance(rng, 12, 14, 6);
    auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
    DreyfusWagner a(inst, oracle, 4), b(inst, oracle, 4);
    auto R = inst.terminals();
    CHECK(a.tree_for({R[0], R[2], R[4]}).edge_indices ==
          b.tree_for({R[0], R[2], R[4]}).edge_indices);
}

TEST_CASE("memory guards") {
    std::mt19937 rng(23);
    auto inst = testutil::random_instance(rng, 40, 40, 26);
    auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
    CHECK_THROWS_WITH_AS(DreyfusWagner(inst, oracle, 6), doctest::Contains("huge"),
                         std::runtime_error);
    CHECK_NOTHROW(DreyfusWagner(inst, oracle, 3));
    auto small = testutil::random_instance(rng, 10, 10, 8);
    auto so = shortest_paths(small, DistMode::apsp, SpPolicy::prefer);
    CHECK_THROWS_WITH_AS(DreyfusWagner(small, so, 8, false, /*max_table_bytes=*/64),
                         doctest::Contains("budget"), std::runtime_error);
}
