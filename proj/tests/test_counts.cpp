#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <vector>

#include "advex/counts.hpp"
#include "advex/harness.hpp"
#include "advex/oracle.hpp"

using namespace advex;

namespace {

// Every assignment of counts (2..max_count per Multi edge, fixed 1 per One
// edge) that satisfies the per-vertex imbalance. Used as an independent check
// that leaf peeling finds the unique solution.
std::vector<TraversalProfile> enumerate_profiles(const Digraph& g, const Classification& classes,
                                                 const std::map<VertexId, long long>& imbalance,
                                                 int max_count) {
    std::vector<int> multis;
    for (int i = 1; i <= g.m(); i++)
        if (classes[static_cast<size_t>(i)] == EdgeClass::Multi) multis.push_back(i);

    TraversalProfile prof(static_cast<size_t>(g.m()) + 1, 0);
    for (int i = 1; i <= g.m(); i++)
        if (classes[static_cast<size_t>(i)] == EdgeClass::One) prof[static_cast<size_t>(i)] = 1;

    std::vector<TraversalProfile> found;
    std::vector<int> pick(multis.size(), 2);
    while (true) {
        for (size_t i = 0; i < multis.size(); i++)
            prof[static_cast<size_t>(multis[i])] = pick[i];
        auto imb = imbalance_of(g, prof);
        bool good = true;
        for (const auto& v : g.vertices)
            if (imb[v] != imbalance.at(v)) good = false;
        if (good) found.push_back(prof);

        size_t at = 0;
        while (at < pick.size() && pick[at] == max_count) pick[at++] = 2;
        if (at == pick.size()) break;
        pick[at]++;
    }
    return found;
}

std::map<VertexId, long long> zero_imbalance(const Digraph& g) {
    std::map<VertexId, long long> imb;
    for (const auto& v : g.vertices) imb[v] = 0;
    return imb;
}

}  // namespace

TEST_CASE("balance resolution") {
    CHECK(balance_resolve(5, 2, true, 0) == 3);   // unknown outgoing count
    CHECK(balance_resolve(2, 6, false, 0) == 4);  // unknown incoming count
    CHECK(balance_resolve(5, 1, true, 1) == 5);   // +1 source surplus
    CHECK_THROWS(balance_resolve(2, 2, true, 0));
    CHECK_THROWS(balance_resolve(1, 3, true, 0));
}

TEST_CASE("leaf peeling recovers oracle profiles exactly") {
    int tested = 0;
    for (std::uint64_t seed = 1; seed <= 40; seed++) {
        GenSpec s;
        s.n = 3 + static_cast<int>(seed % 5);
        s.m = s.n + static_cast<int>(seed % 5);
        s.max_cost = 6;
        s.seed = seed * 131;
        Digraph g = generate(s);
        OptimalSolution sol = solve(g, Closure::Cyclic);
        TraversalProfile prof = solve_counts(g, sol.classes, zero_imbalance(g));
        CHECK(prof == sol.profile);
        tested++;
    }
    CHECK(tested == 40);

    for (int exit = 3; exit <= 6; exit++) {
        Digraph g = funnel_instance(3, exit, 2, 3);
        OptimalSolution sol = solve(g, Closure::Cyclic);
        CHECK(solve_counts(g, sol.classes, zero_imbalance(g)) == sol.profile);
    }
}

TEST_CASE("the balanced assignment is unique among bounded candidates") {
    int with_multi = 0;
    std::vector<Digraph> cases;
    for (std::uint64_t seed = 1; seed <= 25; seed++) {
        GenSpec s;
        s.n = 3 + static_cast<int>(seed % 4);
        s.m = s.n + static_cast<int>(seed % 3);
        s.max_cost = 5;
        s.seed = seed * 733 + 17;
        cases.push_back(generate(s));
    }
    for (int entry = 2; entry <= 3; entry++)
        for (int exit = 3; exit <= 5; exit++) cases.push_back(funnel_instance(entry, exit, 1, 1));

    for (const Digraph& g : cases) {
        OptimalSolution sol = solve(g, Closure::Cyclic);
        auto all = enumerate_profiles(g, sol.classes, zero_imbalance(g), g.n());
        REQUIRE(all.size() == 1);
        CHECK(all.front() == sol.profile);
        for (int i = 1; i <= g.m(); i++)
            if (sol.classes[static_cast<size_t>(i)] == EdgeClass::Multi) with_multi++;
    }
    CHECK(with_multi > 0);  // the funnel cases guarantee nontrivial peeling
}

TEST_CASE("path imbalance shifts one unit from end to start") {
    GenSpec s;
    s.n = 5;
    s.m = 8;
    s.max_cost = 7;
    s.seed = 99;
    Digraph g = generate(s);
    OptimalSolution sol = solve(g, Closure::Path);
    auto imb = zero_imbalance(g);
    imb[g.start] += 1;
    imb[sol.v_end] -= 1;
    CHECK(solve_counts(g, sol.classes, imb) == sol.profile);
}

TEST_CASE("peeling order does not matter") {
    for (std::uint64_t seed = 3; seed <= 10; seed++) {
        GenSpec s;
        s.n = 6;
        s.m = 11;
        s.max_cost = 4;
        s.seed = seed * 41;
        Digraph g = generate(s);
        OptimalSolution sol = solve(g, Closure::Cyclic);
        auto first = solve_counts_with_picker(
            g, sol.classes, zero_imbalance(g),
            [](const std::vector<VertexId>& leaves) { return leaves.front(); });
        auto last = solve_counts_with_picker(
            g, sol.classes, zero_imbalance(g),
            [](const std::vector<VertexId>& leaves) { return leaves.back(); });
        CHECK(first == sol.profile);
        CHECK(last == sol.profile);
    }
}

TEST_CASE("degenerate classifications are rejected") {
    // Multi edges forming an undirected cycle cannot be peeled.
    Digraph g = parse_graph(R"({
      "directed": true, "start": "a", "vertices": ["a", "b", "c"],
      "edges": [{"src":"a","dst":"b","cost":1},{"src":"b","dst":"c","cost":1},
                 {"src":"c","dst":"a","cost":1}]})");
    Classification cyc{EdgeClass::Zero, EdgeClass::Multi, EdgeClass::Multi, EdgeClass::Multi};
    CHECK_THROWS(solve_counts(g, cyc, zero_imbalance(g)));

    // Balance forcing a Multi count below 2 is inconsistent.
    Digraph h = parse_graph(R"({
      "directed": true, "start": "a", "vertices": ["a", "b"],
      "edges": [{"src":"a","dst":"b","cost":1},{"src":"b","dst":"a","cost":1}]})");
    Classification low{EdgeClass::Zero, EdgeClass::Multi, EdgeClass::One};
    CHECK_THROWS(solve_counts(h, low, zero_imbalance(h)));
}
