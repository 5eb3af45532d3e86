#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "advex/graph.hpp"

using namespace advex;

namespace {

const char* kTriangle = R"({
  "directed": true,
  "start": "a",
  "vertices": ["a", "b", "c"],
  "edges": [
    {"src": "a", "dst": "b", "cost": 1},
    {"src": "b", "dst": "c", "cost": 1},
    {"src": "c", "dst": "a", "cost": 1}
  ]
})";

Digraph triangle() { return parse_graph(kTriangle); }

}  // namespace

TEST_CASE("parsing assigns 1-based edge ids in document order") {
    Digraph g = triangle();
    CHECK(g.n() == 3);
    CHECK(g.m() == 3);
    CHECK(g.edge(1).src == "a");
    CHECK(g.edge(2).src == "b");
    CHECK(g.edge(3).dst == "a");
    CHECK(g.directed);
    CHECK(g.start == "a");
}

TEST_CASE("serialize and parse round-trip") {
    Digraph g = triangle();
    Digraph h = parse_graph(serialize_graph(g));
    CHECK(h.n() == g.n());
    CHECK(h.m() == g.m());
    for (int i = 1; i <= g.m(); i++) {
        CHECK(h.edge(i).src == g.edge(i).src);
        CHECK(h.edge(i).dst == g.edge(i).dst);
        CHECK(h.edge(i).cost == g.edge(i).cost);
    }
}

TEST_CASE("validation rejects malformed instances") {
    CHECK_THROWS(parse_graph(R"({"directed":true,"start":"a","vertices":["a","a"],"edges":[]})"));
    CHECK_THROWS(parse_graph(R"({"directed":true,"start":"z","vertices":["a"],"edges":[]})"));
    CHECK_THROWS(parse_graph(
        R"({"directed":true,"start":"a","vertices":["a"],"edges":[{"src":"a","dst":"b","cost":1}]})"));
    CHECK_THROWS(parse_graph(
        R"({"directed":true,"start":"a","vertices":["a"],"edges":[{"src":"a","dst":"a","cost":1}]})"));
    CHECK_THROWS(parse_graph(
        R"({"directed":true,"start":"a","vertices":["a","b"],"edges":[{"src":"a","dst":"b","cost":-2}]})"));
    CHECK_THROWS(parse_graph("not json"));
}

TEST_CASE("perturbed costs for a unit triangle") {
    // m = 3: base 3^6 = 729, tails 81, 9, 1.
    Digraph g = triangle();
    auto p = perturb(g);
    CHECK(p[1] == 810);
    CHECK(p[2] == 738);
    CHECK(p[3] == 730);
    CHECK(p[1] > p[2]);  // earlier edges are dearer at equal cost
    CHECK(p[2] > p[3]);
}

TEST_CASE("perturbation tails cannot change base-cost comparisons") {
    // n * sum of tails < m^(2m): a full profile of tail terms stays below one
    // base unit, so perturbed order refines and never contradicts cost order.
    for (int m : {2, 3, 5, 9, 18}) {
        Big base = 1;
        for (int i = 0; i < 2 * m; i++) base *= m;
        Big tails = 0;
        Big t = base;
        for (int i = 1; i <= m; i++) {
            t /= Big(m) * m;
            tails += t;
        }
        CHECK(Big(m + 1) * tails < base);
    }
}

TEST_CASE("walk accounting") {
    Digraph g = triangle();
    Walk w;
    w.start = "a";
    w.edges = {1, 2, 3, 1};
    CHECK(walk_cost(g, w) == 4);
    auto pert = perturb(g);
    CHECK(walk_cost_perturbed(g, pert, w) == 810 + 738 + 730 + 810);
    auto prof = profile_of(g, w);
    CHECK(prof[1] == 2);
    CHECK(prof[2] == 1);
    CHECK(prof[3] == 1);
    auto seq = walk_vertices(g, w);
    CHECK(seq == std::vector<VertexId>{"a", "b", "c", "a", "b"});
    auto imb = imbalance_of(g, prof);
    CHECK(imb["a"] == 1);
    CHECK(imb["b"] == -1);
    CHECK(imb["c"] == 0);
}

TEST_CASE("walk continuity is enforced") {
    Digraph g = triangle();
    Walk w;
    w.start = "a";
    w.edges = {2};  // edge 2 leaves b, not a
    CHECK_THROWS(walk_vertices(g, w));
}

TEST_CASE("undirected walks infer step direction") {
    Digraph g = parse_graph(R"({
      "directed": false, "start": "a", "vertices": ["a", "b", "c"],
      "edges": [{"src":"a","dst":"b","cost":1},{"src":"c","dst":"b","cost":1}]})");
    Walk w;
    w.start = "a";
    w.edges = {1, 2, 2, 1};  // a-b, b-c, c-b, b-a
    auto seq = walk_vertices(g, w);
    CHECK(seq == std::vector<VertexId>{"a", "b", "c", "b", "a"});
}

TEST_CASE("orientation doubling uses ids 2i-1 and 2i") {
    Digraph g = parse_graph(R"({
      "directed": false, "start": "a", "vertices": ["a", "b", "c"],
      "edges": [{"src":"a","dst":"b","cost":4},{"src":"b","dst":"c","cost":7}]})");
    Digraph d = double_orient(g);
    CHECK(d.directed);
    CHECK(d.m() == 4);
    CHECK(d.edge(1).src == "a");
    CHECK(d.edge(1).dst == "b");
    CHECK(d.edge(2).src == "b");
    CHECK(d.edge(2).dst == "a");
    CHECK(d.edge(3).src == "b");
    CHECK(d.edge(4).src == "c");
    CHECK(d.edge(3).cost == 7);
    CHECK(d.edge(4).cost == 7);
    CHECK(mate(1) == 2);
    CHECK(mate(2) == 1);
    CHECK(mate(3) == 4);
    CHECK(original_of(3) == 2);
    CHECK(original_of(4) == 2);
}

TEST_CASE("dropping orientation keeps ids and costs") {
    Digraph g = triangle();
    Digraph u = drop_orientation(g);
    CHECK(!u.directed);
    CHECK(u.m() == 3);
    CHECK(u.edge(2).src == "b");
    CHECK(u.edge(2).cost == 1);
}

TEST_CASE("connectivity checks match orientation") {
    Digraph g = triangle();
    CHECK(is_strongly_connected(g));
    CHECK_THROWS(is_connected(g));

    Digraph h = parse_graph(R"({
      "directed": true, "start": "a", "vertices": ["a", "b"],
      "edges": [{"src":"a","dst":"b","cost":1}]})");
    CHECK(!is_strongly_connected(h));

    Digraph u = parse_graph(R"({
      "directed": false, "start": "a", "vertices": ["a", "b", "c"],
      "edges": [{"src":"a","dst":"b","cost":1}]})");
    CHECK(!is_connected(u));
}

TEST_CASE("incident edge exposure depends on orientation") {
    Digraph g = triangle();
    CHECK(g.incident_out("a") == std::vector<int>{1});
    Digraph u = drop_orientation(g);
    CHECK(u.incident_out("a") == std::vector<int>{1, 3});
}
