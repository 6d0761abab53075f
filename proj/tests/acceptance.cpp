#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// Acceptance gate: one numbered criterion per test case, one [PASS]/[FAIL]
// line each. Criteria 7 and 8 contain a clause that the chosen component
// cost semantics cannot satisfy (the relaxation bounds the k-restricted
// closure cost, not the unrestricted graph optimum); those clauses are
// measured and reported as FAIL instead of being weakened.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "steiner/exact.hpp"
#include "steiner/gcf.hpp"
#include "steiner/lp.hpp"
#include "steiner/stp_io.hpp"
#include "steiner/two_approx.hpp"
#include "support/testutil.hpp"

using namespace steiner;

namespace {

std::filesystem::path data_dir() {
    const char* env = std::getenv("STEINER_DATA_DIR");
    REQUIRE(env != nullptr);
    return std::filesystem::path(env);
}

Instance fixture(const std::string& name) {
    return parse_stp_file((data_dir() / "fixtures" / name).string());
}

void gate(int num, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", num, detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// Cheapest cost of a component multiset that connects all terminals while
// spending exactly |R|-1 terminal-count-minus-one slots (the budget every
// tree assembled from full components uses).
double best_assembly(const Instance& inst, const ComponentSet& set) {
    const auto& comps = set.components();
    int need = inst.num_terminals() - 1;
    double best = kInf;
    std::vector<int> tid(inst.num_nodes(), -1);
    for (int i = 0; i < inst.num_terminals(); ++i) tid[inst.terminals()[i]] = i;
    std::function<void(std::size_t, int, double, std::vector<int>&)> rec =
        [&](std::size_t i, int budget, double cost, std::vector<int>& chosen) {
            if (cost >= best) return;
            if (budget == 0) {
                UnionFind uf(inst.num_terminals());
                for (int c : chosen)
                    for (std::size_t j = 1; j < comps[c].terminals.size(); ++j)
                        uf.unite(tid[comps[c].terminals[j]], tid[comps[c].terminals[0]]);
                for (int t = 1; t < inst.num_terminals(); ++t)
                    if (uf.find(t) != uf.find(0)) return;
                best = cost;
                return;
            }
            if (i == comps.size()) return;
            int w = static_cast<int>(comps[i].terminals.size()) - 1;
            if (w <= budget) {
                chosen.push_back(static_cast<int>(i));
                rec(i + 1, budget - w, cost + comps[i].cost, chosen);
                chosen.pop_back();
            }
            rec(i + 1, budget, cost, chosen);
        };
    std::vector<int> chosen;
    rec(0, need, 0.0, chosen);
    return best;
}

// Subtour left side minus right side for R', straight from the definition.
double subtour_excess(const SerModel& model, const std::vector<double>& x,
                      const std::vector<int>& rprime) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < model.components().size(); ++i) {
        int inter = 0;
        for (int t : model.components()[i].terminals)
            if (std::binary_search(rprime.begin(), rprime.end(), t)) ++inter;
        if (inter >= 1) lhs += (inter - 1) * x[i];
    }
    return lhs - (static_cast<double>(rprime.size()) - 1.0);
}

double worst_subtour_excess(const SerModel& model, const std::vector<double>& x) {
    const auto& R = model.terminals();
    const int r = static_cast<int>(R.size());
    double worst = -kInf;
    for (unsigned mask = 1; mask < (1u << r); ++mask) {
        std::vector<int> rprime;
        for (int p = 0; p < r; ++p)
            if (mask & (1u << p)) rprime.push_back(R[p]);
        if (rprime.size() < 2) continue;
        worst = std::max(worst, subtour_excess(model, x, rprime));
    }
    return worst;
}

// Max absolute win over the set's components with at least three terminals
// (pairs never get contracted); -inf when none qualify.
double max_win(const ContractionState& state, const ComponentSet& set,
               const FullComponent** arg = nullptr) {
    double best = -kInf;
    for (const auto& c : set.components()) {
        if (c.terminals.size() < 3) continue;
        double w = win_value(state, c, WinKind::abs);
        if (w > best) {
            best = w;
            if (arg) *arg = &c;
        }
    }
    return best;
}

}  // namespace

TEST_CASE("criterion 1: exact solver agrees with exhaustive enumeration") {
    auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(101);
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        int n = 5 + static_cast<int>(rng() % 6);  // at most 10 nodes
        int r = 2 + static_cast<int>(rng() % (n - 1));
        auto inst = testutil::random_instance(rng, n, 3 + rng() % 6, r);
        auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        double dw = DreyfusWagner::solve(inst, oracle).cost;
        double brute = testutil::brute_force_steiner(inst);
        if (std::abs(dw - brute) > 1e-9) ++mismatches;
        CHECK(dw == doctest::Approx(brute));
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(mismatches == 0);
    CHECK(secs < 60.0);
    gate(1, mismatches == 0 && secs < 60.0,
         fmt("exact cost equals enumeration on 200 random instances, %d mismatches, %.1f s",
             mismatches, secs));
}

TEST_CASE("criterion 2: heuristics stay within twice the optimum") {
    std::mt19937 rng(202);
    int violations = 0;
    for (int i = 0; i < 500; ++i) {
        int n = 6 + static_cast<int>(rng() % 7);
        int r = 2 + static_cast<int>(rng() % std::min(n - 1, 9));  // at most 10 terminals
        auto inst = testutil::random_instance(rng, n, 4 + rng() % 6, r);
        auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        double exact = DreyfusWagner::solve(inst, oracle).cost;
        for (double cost : {steiner::tm(inst).cost, kmb(inst, oracle).cost, mehlhorn(inst).cost}) {
            if (cost > 2.0 * exact + 1e-9) ++violations;
            CHECK(cost <= 2.0 * exact + 1e-9);
        }
    }
    CHECK(violations == 0);
    gate(2, violations == 0,
         fmt("tm/kmb/mehlhorn within 2x optimum on 500 random instances, %d violations",
             violations));
}

TEST_CASE("criterion 3: greedy contraction ratio and closure-tree dominance") {
    std::mt19937 rng(202);  // same corpus as criterion 2
    int ratio_viol = 0, dominance_viol = 0;
    for (int i = 0; i < 500; ++i) {
        int n = 6 + static_cast<int>(rng() % 7);
        int r = 2 + static_cast<int>(rng() % std::min(n - 1, 9));
        auto inst = testutil::random_instance(rng, n, 4 + rng() % 6, r);
        auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        double exact = DreyfusWagner::solve(inst, oracle).cost;
        double closure_tree = kmb(inst, oracle).cost;
        auto set = gen_all_naive(inst, oracle, 3);
        for (auto win : {WinKind::abs, WinKind::rel})
            for (auto save : {SaveMode::matrix, SaveMode::static_tree, SaveMode::dynamic_tree}) {
                GcfOptions opts;
                opts.win = win;
                opts.save = save;
                auto res = run_gcf(inst, oracle, set, opts);
                if (win == WinKind::abs && save == SaveMode::matrix) {
                    if (res.tree.cost > 11.0 / 6.0 * exact + 1e-9) ++ratio_viol;
                    CHECK(res.tree.cost <= 11.0 / 6.0 * exact + 1e-9);
                }
                if (res.tree.cost > closure_tree + 1e-9) ++dominance_viol;
                CHECK(res.tree.cost <= closure_tree + 1e-9);
            }
    }
    gate(3, ratio_viol == 0 && dominance_viol == 0,
         fmt("absolute-win cost within 11/6 of optimum (%d violations) and every win/save "
             "variant at most the terminal-closure tree (%d violations) on 500 instances",
             ratio_viol, dominance_viol));
}

TEST_CASE("criterion 4: the three save oracles agree at every step") {
    std::mt19937 rng(404);
    int mismatches = 0, runs = 0, steps = 0;
    for (; runs < 100; ++runs) {
        int n = 14 + static_cast<int>(rng() % 3);
        int r = 4 + static_cast<int>(rng() % 9);  // at most 12 terminals
        auto inst = testutil::random_instance(rng, n, 5 + rng() % 6, r);
        auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        auto set = gen_all_naive(inst, oracle, 3);
        ContractionState mat(inst, oracle, SaveMode::matrix);
        ContractionState sta(inst, oracle, SaveMode::static_tree);
        ContractionState dyn(inst, oracle, SaveMode::dynamic_tree);
        for (;;) {
            ++steps;
            for (int a = 0; a < r; ++a)
                for (int b = a + 1; b < r; ++b) {
                    double m = mat.save_between(a, b);
                    // integer edge costs, so agreement must be exact
                    if (sta.save_between(a, b) != m || dyn.save_between(a, b) != m)
                        ++mismatches;
                    CHECK(sta.save_between(a, b) == m);
                    CHECK(dyn.save_between(a, b) == m);
                }
            const FullComponent* pick = nullptr;
            double w = max_win(mat, set, &pick);
            if (!pick || w <= 0) break;
            mat.contract(*pick);
            sta.contract(*pick);
            dyn.contract(*pick);
        }
    }
    CHECK(mismatches == 0);
    gate(4, mismatches == 0,
         fmt("matrix/static/dynamic save values identical over %d runs (%d steps, all pairs, "
             "exact equality), %d mismatches",
             runs, steps, mismatches));
}

TEST_CASE("criterion 5: appending an edge never raises a save value") {
    std::mt19937 rng(909);
    int trials = 0, violations = 0;
    while (trials < 10000) {
        auto inst = testutil::random_instance(rng, 10, 11, 4 + static_cast<int>(rng() % 4));
        auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        ContractionState state(inst, oracle, SaveMode::matrix);
        const auto& R = inst.terminals();
        const int r = inst.num_terminals();
        for (int step = 0; step < 40 && trials < 10000; ++step, ++trials) {
            std::vector<int> sub(R.begin(), R.end());
            std::shuffle(sub.begin(), sub.end(), rng);
            sub.resize(2 + rng() % (r - 1));
            double before = state.save_terminals(sub);
            int a = static_cast<int>(rng() % r), b = static_cast<int>(rng() % r);
            if (a == b) b = (b + 1) % r;
            state.append_link(a, b, static_cast<double>(rng() % 15), kOriginZero);
            if (state.save_terminals(sub) > before + 1e-9) ++violations;
            CHECK(state.save_terminals(sub) <= before + 1e-9);
        }
    }
    CHECK(violations == 0);
    gate(5, violations == 0,
         fmt("save monotone under edge insertion in 10000 trials, %d violations", violations));
}

TEST_CASE("criterion 6: region-restricted generation matches for k=3, separates for k=4") {
    std::mt19937 rng(606);
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        int n = 8 + static_cast<int>(rng() % 6);
        int r = 3 + static_cast<int>(rng() % 4);
        auto inst = testutil::random_instance(rng, n, 4 + rng() % 6, r);
        auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        auto voronoi = voronoi_regions(inst);
        auto all = gen_all_naive(inst, oracle, 3);
        auto vor = gen_voronoi(inst, oracle, voronoi, 3);
        ContractionState state(inst, oracle, SaveMode::matrix);
        for (;;) {
            const FullComponent* pick = nullptr;
            double wa = max_win(state, all, &pick);
            double wv = max_win(state, vor);
            // once neither side improves, the runs have already converged to
            // the same tree; only promising maxima steer the greedy
            if (wa <= 0 && wv <= 0) break;
            if (std::abs(wa - wv) > 1e-9) ++mismatches;
            CHECK(wa == doctest::Approx(wv));
            if (!pick || wa <= 0) break;
            state.contract(*pick);
        }
    }
    auto hub = fixture("hub4.stp");
    auto oracle = shortest_paths(hub, DistMode::apsp, SpPolicy::prefer);
    auto voronoi = voronoi_regions(hub);
    double eps = 0.25;
    double all4 = best_assembly(hub, gen_all_naive(hub, oracle, 4));
    double vor4 = best_assembly(hub, gen_voronoi(hub, oracle, voronoi, 4));
    CHECK(all4 == doctest::Approx(8.0 + 4.0 * eps));
    CHECK(vor4 == doctest::Approx(9.0 + 3.0 * eps));
    bool hub_ok = std::abs(all4 - 9.0) < 1e-9 && std::abs(vor4 - 9.75) < 1e-9;
    gate(6, mismatches == 0 && hub_ok,
         fmt("k=3 max win identical under both generators on 200 instances (%d mismatches); "
             "two-hub fixture assembles to %.2f exhaustive vs %.2f region-restricted at k=4",
             mismatches, all4, vor4));
}

TEST_CASE("criterion 7: relaxation pins, clean subtour scan, bound vs optimum") {
    auto cycle = fixture("cycle4.stp");
    auto co = shortest_paths(cycle, DistMode::apsp, SpPolicy::prefer);
    auto cset = gen_all_naive(cycle, co, 3);
    auto plain = solve_ser(cycle, cset, SerOptions{});
    CHECK(plain.objective == doctest::Approx(4.5).epsilon(1e-6));
    SerOptions strong;
    strong.stronger = true;
    auto lifted = solve_ser(cycle, cset, strong);
    CHECK(lifted.objective > plain.objective + 1e-6);
    CHECK(lifted.objective == doctest::Approx(5.0).epsilon(1e-6));

    // every bundled fixture has at most 8 terminals, so the scan is exhaustive
    double worst = -kInf;
    for (const auto& entry : std::filesystem::directory_iterator(data_dir() / "fixtures")) {
        auto inst = parse_stp_file(entry.path().string());
        auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        auto set = gen_all_naive(inst, oracle, 3);
        SerModel model(set.components(), inst.terminals());
        auto sol = solve_ser(model, SerOptions{}, 3);
        worst = std::max(worst, worst_subtour_excess(model, sol.x));
    }
    CHECK(worst <= 1e-7);

    // The bound clause fails by design of the component cost semantics: the
    // relaxation lower-bounds the 3-restricted closure cost, which exceeds
    // the unrestricted optimum whenever no 3-restricted decomposition is
    // tight (the cycle fixture is the canonical case: 4.5 > 4).
    double cycle_exact = DreyfusWagner::solve(cycle, co).cost;
    CHECK(plain.objective > cycle_exact);  // pins the known deviation
    std::mt19937 rng(707);
    int above = 0;
    double excess = 0.0;
    for (int i = 0; i < 100; ++i) {
        int n = 7 + static_cast<int>(rng() % 5);
        auto inst = testutil::random_instance(rng, n, 4 + rng() % 4, 3 + rng() % 4);
        auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        double exact = DreyfusWagner::solve(inst, oracle).cost;
        auto sol = solve_ser(inst, gen_all_naive(inst, oracle, 3), SerOptions{});
        if (sol.objective > exact + 1e-6) {
            ++above;
            excess = std::max(excess, sol.objective - exact);
        }
    }
    bool pins_ok = std::abs(plain.objective - 4.5) < 1e-6 && std::abs(lifted.objective - 5.0) < 1e-6;
    gate(7, false,
         fmt("cycle relaxation 4.5 and lifted 5.0 %s, post-convergence subtour scan clean "
             "(worst excess %.1e); but the bound-vs-optimum clause fails: the relaxation "
             "exceeds the unrestricted optimum on the cycle fixture (4.5 > %.1f) and on "
             "%d/100 random instances (worst +%.1f), because it bounds the 3-restricted "
             "closure cost, not the optimum",
             pins_ok ? "hold" : "FAIL", worst, cycle_exact, above, excess));
}

TEST_CASE("criterion 8: rounding produces valid trees; bound clause measured") {
    std::mt19937 rng(42);
    int invalid = 0, below_lp = 0, below_exact = 0;
    double worst_gap = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        int n = 9 + static_cast<int>(rng() % 4);
        auto inst = testutil::random_instance(rng, n, 12, 4 + rng() % 3);
        auto oracle = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        auto set = gen_all_naive(inst, oracle, 3);
        auto sol = solve_ser(inst, set, SerOptions{});
        RoundOptions opts;
        opts.seed = static_cast<std::uint64_t>(trial);
        auto tree = round_iterative(inst, set, opts);
        if (!check_steiner_tree(inst, tree).empty()) ++invalid;
        CHECK(check_steiner_tree(inst, tree).empty());
        double exact = DreyfusWagner::solve(inst, oracle).cost;
        if (tree.cost < exact - 1e-9) ++below_exact;
        CHECK(tree.cost >= exact - 1e-9);
        if (tree.cost < sol.objective - 1e-9) {
            ++below_lp;
            worst_gap = std::max(worst_gap, sol.objective - tree.cost);
        }
    }
    CHECK(below_exact == 0);

    // integral case: the star fixture's relaxation is integral (one
    // component at weight 1) and must round to exactly its objective
    auto star = fixture("star4.stp");
    auto so = shortest_paths(star, DistMode::apsp, SpPolicy::prefer);
    auto sset = gen_all_naive(star, so, 3);
    auto ssol = solve_ser(star, sset, SerOptions{});
    bool integral = true;
    for (double x : ssol.x)
        if (x > kLpTau && x < 1.0 - kLpTau) integral = false;
    CHECK(integral);
    RoundOptions sopts;
    sopts.deterministic = true;
    auto stree = round_iterative(star, sset, sopts);
    CHECK(stree.cost == ssol.objective);

    gate(8, false,
         fmt("all 100 seeded rounding runs yield valid trees (%d invalid) costing at least "
             "the optimum (%d below) and the integral star relaxation rounds to exactly its "
             "objective; but the tree-at-least-the-relaxation clause fails on %d/100 runs "
             "(worst %.1f below): shared path expansions realize less than the closure-priced "
             "relaxation, which itself can exceed the optimum",
             invalid, below_exact, below_lp, worst_gap));
}

TEST_CASE("criterion 9: bundled corpus direction of effect") {
    auto dir = data_dir() / "b_like";
    auto bounds = parse_bounds_file((dir / "bounds.txt").string());
    // seeded stand-in corpus in the style of the classic 50-100 node
    // benchmark sets; bounds.txt holds exact optima certified offline
    double tm_gap = 0.0, abs_gap = 0.0, rel_gap = 0.0;
    int count = 0, order_viol = 0;
    long prefer_invalid_total = 0, forbid_invalid_total = 0, pairs_total = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".stp") continue;
        auto inst = parse_stp_file(entry.path().string());
        double best = bounds.at(inst.name());
        auto prefer = shortest_paths(inst, DistMode::apsp, SpPolicy::prefer);
        auto forbid = shortest_paths(inst, DistMode::apsp, SpPolicy::forbid);
        auto set = gen_all_naive(inst, prefer, 3);
        tm_gap += gap_permil(steiner::tm(inst).cost, best);
        GcfOptions oa;
        oa.win = WinKind::abs;
        abs_gap += gap_permil(run_gcf(inst, prefer, set, oa).tree.cost, best);
        GcfOptions orl;
        orl.win = WinKind::rel;
        rel_gap += gap_permil(run_gcf(inst, prefer, set, orl).tree.cost, best);
        ++count;
        int pinv = 0, finv = 0, pairs = 0;
        const auto& R = inst.terminals();
        for (std::size_t a = 0; a < R.size(); ++a)
            for (std::size_t b = a + 1; b < R.size(); ++b) {
                ++pairs;
                if (!prefer.valid(R[a], R[b])) ++pinv;
                if (!forbid.valid(R[a], R[b])) ++finv;
            }
        if (pinv < finv) ++order_viol;
        CHECK(pinv >= finv);
        prefer_invalid_total += pinv;
        forbid_invalid_total += finv;
        pairs_total += pairs;
    }
    CHECK(count >= 15);
    tm_gap /= count;
    abs_gap /= count;
    rel_gap /= count;
    CHECK(abs_gap < tm_gap);
    CHECK(rel_gap < tm_gap);
    double pvalid = 100.0 * (pairs_total - prefer_invalid_total) / pairs_total;
    double fvalid = 100.0 * (pairs_total - forbid_invalid_total) / pairs_total;
    bool ok = count >= 15 && abs_gap < tm_gap && rel_gap < tm_gap && order_viol == 0;
    gate(9, ok,
         fmt("seeded stand-in corpus (%d instances): avg gap permil tm %.2f vs greedy "
             "abs %.2f / rel %.2f; prefer invalidates >= forbid on every instance "
             "(valid pairs %.1f%% vs %.1f%%)",
             count, tm_gap, abs_gap, rel_gap, pvalid, fvalid));
}

TEST_CASE("criterion 10: format round-trip and gap formatting pins") {
    int files = 0, mismatched = 0;
    for (const char* sub : {"fixtures", "b_like"}) {
        for (const auto& entry : std::filesystem::directory_iterator(data_dir() / sub)) {
            if (entry.path().extension() != ".stp") continue;
            ++files;
            auto first = parse_stp_file(entry.path().string());
            auto text = write_stp(first);
            auto second = parse_stp(text);
            bool same = first.num_nodes() == second.num_nodes() &&
                        first.terminals() == second.terminals() &&
                        first.edges().size() == second.edges().size() &&
                        write_stp(second) == text;
            for (std::size_t i = 0; same && i < first.edges().size(); ++i) {
                const auto& a = first.edges()[i];
                const auto& b = second.edges()[i];
                same = a.u == b.u && a.v == b.v && a.cost == b.cost;
            }
            if (!same) ++mismatched;
            CHECK(same);
        }
    }
    char small[32], large[32];
    std::snprintf(small, sizeof small, "%.4f", gap_permil(6001175, 6001164));
    std::snprintf(large, sizeof large, "%.2f", gap_permil(11600427, 6001164));
    CHECK(std::string(small) == "0.0018");
    CHECK(std::string(large) == "933.03");
    bool ok = mismatched == 0 && std::string(small) == "0.0018" && std::string(large) == "933.03";
    gate(10, ok,
         fmt("parse/write/parse identity on %d bundled files (%d mismatches); gap permil "
             "prints %s and %s",
             files, mismatched, small, large));
}
