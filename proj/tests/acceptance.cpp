// Acceptance gate for the library: one line per criterion, nonzero exit if
// any criterion fails. Takes the test data directory as its only argument.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "advex/bits.hpp"
#include "advex/counts.hpp"
#include "advex/explorer.hpp"
#include "advex/graph.hpp"
#include "advex/harness.hpp"
#include "advex/oracle.hpp"
#include "advex/trees.hpp"

using namespace advex;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Every count assignment (2..max_count per Multi edge, 1 per One edge) that
// satisfies the per-vertex imbalance.
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

// Thread an original walk through the bounded transform: descend the source's
// out tree, take the transformed real edge, ascend the target's in tree.
Walk lift_walk(const Digraph& g, const TraversalProfile& profile, const BoundedGraph& h,
               const Walk& w) {
    std::map<std::pair<VertexId, VertexId>, int> by_ends;
    for (const auto& e : h.edges)
        if (e.real_id == 0) by_ends[{e.src, e.dst}] = e.id;
    auto edge_between = [&](const VertexId& a, const VertexId& b) { return by_ends.at({a, b}); };

    std::map<VertexId, InOutTree> trees;
    for (const auto& v : g.vertices) {
        int ui = static_cast<int>(sorted_used_in(g, profile, v).size());
        int uo = static_cast<int>(sorted_used_out(g, profile, v).size());
        trees.emplace(v, build_inout_tree(v, ui, uo));
    }

    Walk hw;
    hw.start = w.start;
    VertexId at = w.start;
    for (int id : w.edges) {
        const Edge& e = g.edge(id);
        auto outs = sorted_used_out(g, profile, at);
        size_t oi = 0;
        while (outs[oi] != id) oi++;
        const InOutTree& ts = trees.at(at);
        if (ts.used_out >= 3) {
            int slot = ts.out_layout.slot_order[oi];
            std::vector<int> anc;
            for (int p = TreeLayout::parent(slot); p != 0; p = TreeLayout::parent(p))
                anc.push_back(p);
            VertexId cur = at;
            for (size_t i = anc.size(); i-- > 0;) {
                VertexId nxt = virtual_id(at, true, anc[i]);
                hw.edges.push_back(edge_between(cur, nxt));
                cur = nxt;
            }
        }
        hw.edges.push_back(h.real_to_h.at(id));

        VertexId to = e.dst;
        auto ins = sorted_used_in(g, profile, to);
        size_t ii = 0;
        while (ins[ii] != id) ii++;
        const InOutTree& tt = trees.at(to);
        if (tt.used_in >= 3) {
            int slot = tt.in_layout.slot_order[ii];
            std::vector<int> anc;
            for (int p = TreeLayout::parent(slot); p != 0; p = TreeLayout::parent(p))
                anc.push_back(p);
            for (size_t i = 0; i + 1 < anc.size(); i++)
                hw.edges.push_back(edge_between(virtual_id(to, false, anc[i]),
                                                virtual_id(to, false, anc[i + 1])));
            if (!anc.empty())
                hw.edges.push_back(edge_between(virtual_id(to, false, anc.back()), to));
        }
        at = to;
    }
    return hw;
}

struct Gate {
    int failed = 0;

    void run(int k, const std::string& what, const std::function<std::pair<bool, std::string>()>& fn) {
        bool ok = false;
        std::string detail;
        try {
            auto [o, d] = fn();
            ok = o;
            detail = d;
        } catch (const std::exception& ex) {
            detail = std::string("exception: ") + ex.what();
        }
        std::printf("criterion %2d: %s  %s%s%s\n", k, ok ? "PASS" : "FAIL", what.c_str(),
                    detail.empty() ? "" : ": ", detail.c_str());
        std::fflush(stdout);
        if (!ok) failed++;
    }
};

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <data-dir>\n");
        return 2;
    }
    const std::string data_dir = argv[1];
    Gate gate;

    auto corpus = default_corpus(1);
    CorpusResult res;
    double corpus_secs = 0.0;

    gate.run(1, "optimal tours on the default corpus under all eight variants", [&] {
        auto t0 = std::chrono::steady_clock::now();
        res = run_corpus(corpus);
        corpus_secs = seconds_since(t0);
        bool ok = res.failures() == 0 && res.rejected.empty() &&
                  res.reports.size() == corpus.size() * 8 && corpus_secs < 60.0;
        std::ostringstream d;
        d << corpus.size() << " instances, " << res.reports.size() << " rows, "
          << res.failures() << " failures, " << std::fixed << std::setprecision(2) << corpus_secs
          << "s (limit 60s)";
        if (res.failures() > 0)
            for (const auto& r : res.reports)
                if (!r.ok) {
                    d << "; first: " << r.instance << " " << r.variant << " " << r.error;
                    break;
                }
        return std::pair{ok, d.str()};
    });

    gate.run(2, "advice budgets hold, exactly for the known weighted variants", [&] {
        int exact = 0, within = 0, broken = 0;
        for (const auto& r : res.reports) {
            bool inside = static_cast<double>(r.bits_read) <= r.bound + 1e-9;
            if (!inside) broken++;
            if (r.variant.rfind("known-", 0) == 0 &&
                r.variant.find("-unit") == std::string::npos) {
                if (static_cast<double>(r.bits_read) == r.bound) exact++;
                else broken++;
            } else if (inside) {
                within++;
            }
        }
        std::ostringstream d;
        d << exact << " rows met their budget exactly, " << within << " stayed inside, "
          << broken << " violations";
        return std::pair{broken == 0 && exact > 0 && !res.reports.empty(), d.str()};
    });

    gate.run(3, "every canonical solution passes the structural bound checks", [&] {
        int checked = 0;
        for (const auto& [id, inst] : corpus) {
            Digraph proto = inst.directed ? inst : double_orient(inst);
            for (Closure c : {Closure::Cyclic, Closure::Path}) {
                Digraph g = proto;
                OptimalSolution sol = solve(g, c);
                Walk w = sol.walk;
                int virt = 0;
                if (c == Closure::Path) {
                    virt = g.m() + 1;
                    augment_with_closing(g, sol.profile, sol.v_end);
                    w.edges.push_back(virt);
                }
                ValidationReport rep = validate_structure(g, sol.profile, w, virt);
                if (!rep.all())
                    return std::pair{false, id + ": " + rep.detail};
                checked++;
            }
        }
        return std::pair{true, std::to_string(checked) + " solutions validated"};
    });

    gate.run(4, "peeled counts equal the unique balanced assignment", [&] {
        std::vector<Digraph> cases;
        for (std::uint64_t seed = 1; seed <= 25; seed++) {
            GenSpec s;
            s.n = 3 + static_cast<int>(seed % 4);
            s.m = s.n + static_cast<int>(seed % 3);
            s.max_cost = 5;
            s.seed = seed * 733 + 17;
            cases.push_back(generate(s));
        }
        for (auto [e, x] : {std::pair{1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 3}, {3, 5}})
            cases.push_back(funnel_instance(e, x, 1, 1));
        int nontrivial = 0;
        for (const Digraph& g : cases) {
            OptimalSolution sol = solve(g, Closure::Cyclic);
            auto all = enumerate_profiles(g, sol.classes, zero_imbalance(g), g.n());
            if (all.size() != 1 || all.front() != sol.profile)
                return std::pair{false, std::string("ambiguous or mismatched assignment")};
            if (solve_counts(g, sol.classes, zero_imbalance(g)) != sol.profile)
                return std::pair{false, std::string("peeling disagrees with the oracle")};
            for (int i = 1; i <= g.m(); i++)
                if (sol.classes[static_cast<size_t>(i)] == EdgeClass::Multi) nontrivial++;
        }
        return std::pair{nontrivial > 0,
                         std::to_string(cases.size()) + " instances, " +
                             std::to_string(nontrivial) + " multi counts recovered"};
    });

    gate.run(5, "count budget recursion stays under its closed form cap", [&] {
        auto t0 = std::chrono::steady_clock::now();
        std::vector<double> g = g_table(256);
        double secs = seconds_since(t0);
        bool ok = g[4] == 1.0 && secs < 1.0;
        for (int y = 4; y <= 256 && ok; y++)
            ok = g[static_cast<size_t>(y)] <=
                 2.5 * y - 3.0 * std::log2(static_cast<double>(y)) - 3.0 + 1e-9;
        std::ostringstream d;
        d << "g(4)=" << g[4] << ", 256 values in " << std::fixed << std::setprecision(3) << secs
          << "s (limit 1s)";
        return std::pair{ok, d.str()};
    });

    gate.run(6, "count codewords stay within their self delimiting budget", [&] {
        for (long long x = 2; x <= (1 << 20); x++) {
            double lx = std::log2(static_cast<double>(x));
            double cap = lx + 2.0 * (x == 2 ? 0.0 : std::log2(lx)) + 2.0;
            if (static_cast<double>(AdviceTape::encode_count(x).size()) > cap + 1e-9)
                return std::pair{false, "codeword too long at x=" + std::to_string(x)};
        }
        std::uint64_t state = 88172645463325252ull;
        auto rnd = [&] {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            return state;
        };
        for (int i = 0; i < 10000; i++) {
            long long x = 2 + static_cast<long long>(rnd() % ((1ull << 40) - 2));
            AdviceTape t;
            t.write_count(x);
            if (t.read_count() != x || !t.exhausted())
                return std::pair{false, "round trip failed at x=" + std::to_string(x)};
        }
        return std::pair{true, std::string("exhaustive to 2^20 plus 10000 round trips")};
    });

    gate.run(7, "bounded degree transform growth and walk mapping", [&] {
        std::vector<Digraph> cases;
        for (std::uint64_t seed = 300; seed < 320; seed++) {
            GenSpec s;
            s.n = 4 + static_cast<int>(seed % 5);
            s.m = s.n + 2 + static_cast<int>(seed % 6);
            s.max_cost = 9;
            s.seed = seed;
            cases.push_back(generate(s));
        }
        for (auto [e, x] : {std::pair{2, 5}, {3, 5}, {4, 6}})
            cases.push_back(funnel_instance(e, x, 2, 3));
        for (const Digraph& g : cases) {
            OptimalSolution sol = solve(g, Closure::Cyclic);
            BoundedGraph h = transform_used(g, sol.profile);
            if (h.n() > 2 * g.m() || h.m() > 3 * g.m())
                return std::pair{false, std::string("transform exceeded its size bounds")};
            Walk hw = lift_walk(g, sol.profile, h, sol.walk);
            Walk back = map_walk_back(h, g, hw);
            if (back.edges != sol.walk.edges || walk_cost(g, back) != walk_cost(g, sol.walk))
                return std::pair{false, std::string("walk did not map back unchanged")};
        }

        Digraph fan;
        fan.directed = true;
        fan.start = "h";
        fan.vertices = {"h"};
        for (int i = 0; i < 11; i++) fan.vertices.push_back("i" + std::to_string(i));
        for (int j = 0; j < 9; j++) fan.vertices.push_back("o" + std::to_string(j));
        int id = 1;
        for (int i = 0; i < 11; i++) fan.edges.push_back({id++, "i" + std::to_string(i), "h", 1});
        for (int j = 0; j < 9; j++) fan.edges.push_back({id++, "h", "o" + std::to_string(j), 1});
        for (int j = 0; j < 9; j++)
            fan.edges.push_back({id++, "o" + std::to_string(j), "i" + std::to_string(j), 1});
        fan.edges.push_back({id++, "o0", "i9", 1});
        fan.edges.push_back({id++, "o1", "i10", 1});
        fan.validate();
        fan.build_index();
        TraversalProfile ones(static_cast<size_t>(fan.m()) + 1, 1);
        ones[0] = 0;
        int virt = transform_used(fan, ones).virtual_vertex_count();
        if (virt != 16)
            return std::pair{false, "11-in 9-out hub produced " + std::to_string(virt) +
                                        " virtual vertices, wanted 16"};
        return std::pair{true, std::to_string(cases.size()) + " instances plus the 11x9 hub"};
    });

    gate.run(8, "the bundled bottleneck fixture reproduces its frozen numbers", [&] {
        Digraph g = load_graph(data_dir + "/bottleneck.json");
        OptimalSolution sol = solve(g, Closure::Cyclic);
        if (walk_cost(g, sol.walk) != 25)
            return std::pair{false, std::string("optimal cost changed")};
        std::multiset<int> multi_counts;
        for (int i = 1; i <= g.m(); i++)
            if (sol.classes[static_cast<size_t>(i)] == EdgeClass::Multi)
                multi_counts.insert(sol.profile[static_cast<size_t>(i)]);
        if (multi_counts != std::multiset<int>{4, 4, 5})
            return std::pair{false, std::string("multi traversal counts changed")};
        RecordedRun rr = record_run(g, parse_variant("unknown-directed-cyclic"));
        double bound = advice_bound(parse_variant("unknown-directed-cyclic"), g.n(), g.m());
        std::ostringstream d;
        d << "cost 25, multi counts {4,4,5}, " << rr.run.bits_read << " bits vs bound " << bound;
        return std::pair{static_cast<double>(rr.run.bits_read) <= bound, d.str()};
    });

    gate.run(9, "recording is deterministic and replay is bit exact", [&] {
        int runs = 0;
        for (size_t i = 0; i < corpus.size(); i += 10) {
            const Digraph& inst = corpus[i].second;
            for (const VariantConfig& vc : all_variants()) {
                Digraph adapted = vc.directed == inst.directed
                                      ? inst
                                      : (vc.directed ? double_orient(inst)
                                                     : drop_orientation(inst));
                RecordedRun a = record_run(adapted, vc);
                RecordedRun b = record_run(adapted, vc);
                if (a.tape.bits != b.tape.bits)
                    return std::pair{false, corpus[i].first + " " + vc.name() +
                                                ": tapes differ between recordings"};
                ExploreResult rp = replay_run(adapted, vc, a.tape);
                if (rp.walk.edges != a.run.walk.edges || rp.bits_read != a.run.bits_read)
                    return std::pair{false, corpus[i].first + " " + vc.name() +
                                                ": replay diverged"};
                runs++;
            }
        }
        return std::pair{runs > 0, std::to_string(runs) + " recordings doubled and replayed"};
    });

    gate.run(10, "count profiles are unique among all bounded assignments", [&] {
        std::vector<Digraph> cases;
        for (std::uint64_t seed = 0; seed < 100; seed++) {
            GenSpec s;
            s.n = 3 + static_cast<int>(seed % 5);
            s.m = s.n + static_cast<int>(seed % 6);
            s.max_cost = seed % 3 == 0 ? 30 : 6;
            s.seed = seed * 61 + 7;
            cases.push_back(generate(s));
        }
        for (auto [e, x] : {std::pair{1, 2}, {1, 3}, {2, 2}})
            cases.push_back(funnel_instance(e, x, 1, 1));
        int nontrivial = 0;
        for (const Digraph& g : cases) {
            if (g.n() > 7) return std::pair{false, std::string("sweep exceeded n=7")};
            OptimalSolution sol = solve(g, Closure::Cyclic);
            auto all = enumerate_profiles(g, sol.classes, zero_imbalance(g), g.n());
            if (all.size() != 1 || all.front() != sol.profile)
                return std::pair{false, std::string("assignment not unique")};
            bool has_multi = false;
            for (int i = 1; i <= g.m(); i++)
                if (sol.classes[static_cast<size_t>(i)] == EdgeClass::Multi) has_multi = true;
            if (has_multi) nontrivial++;
        }
        std::ostringstream d;
        d << cases.size() << " instances, " << nontrivial << " with multi edges";
        return std::pair{nontrivial > 0, d.str()};
    });

    if (gate.failed == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", gate.failed);
    return 1;
}
