#include "advex/oracle.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

namespace advex {

namespace {

struct SearchSetup {
    std::vector<VertexId> order;              // sorted vertex ids; index = bitmask position
    std::map<VertexId, int> index;
    uint32_t full = 0;

    explicit SearchSetup(const Digraph& g) {
        order = g.vertices;
        std::sort(order.begin(), order.end());
        for (size_t i = 0; i < order.size(); i++) index[order[i]] = static_cast<int>(i);
        full = (order.size() >= 32) ? 0 : ((1u << order.size()) - 1);
    }
};

uint32_t encode(int vertex, uint32_t mask) { return (mask << 4) | static_cast<uint32_t>(vertex); }

Walk search(const Digraph& g, Closure closure, const std::vector<Big>& costs) {
    if (!g.directed) throw std::logic_error("exact search expects a directed graph");
    if (g.n() > kExactSearchLimit)
        throw std::runtime_error("instance exceeds the exact-search limit of " +
                                 std::to_string(kExactSearchLimit) + " vertices");
    SearchSetup s(g);
    const int v0 = s.index.at(g.start);
    const size_t states = static_cast<size_t>(g.n()) << g.n();

    std::vector<Big> dist(states);
    std::vector<bool> reached(states, false), settled(states, false);
    std::vector<std::pair<uint32_t, int>> pred(states, {0, 0});  // (state, edge id)

    auto state_of = [&](int v, uint32_t mask) {
        return static_cast<size_t>(mask) * static_cast<size_t>(g.n()) + static_cast<size_t>(v);
    };

    using QItem = std::pair<Big, uint32_t>;  // (dist, encoded state)
    auto cmp = [](const QItem& a, const QItem& b) { return a > b; };
    std::priority_queue<QItem, std::vector<QItem>, decltype(cmp)> pq(cmp);

    uint32_t start_mask = 1u << v0;
    size_t start_state = state_of(v0, start_mask);
    dist[start_state] = 0;
    reached[start_state] = true;
    pq.push({0, encode(v0, start_mask)});

    while (!pq.empty()) {
        auto [d, enc] = pq.top();
        pq.pop();
        int v = static_cast<int>(enc & 0xf);
        uint32_t mask = enc >> 4;
        size_t st = state_of(v, mask);
        if (settled[st] || d != dist[st]) continue;
        settled[st] = true;
        for (int id : g.out_ids.at(s.order[static_cast<size_t>(v)])) {
            const Edge& e = g.edge(id);
            int w = s.index.at(e.dst);
            uint32_t nmask = mask | (1u << w);
            size_t nst = state_of(w, nmask);
            Big nd = d + costs[static_cast<size_t>(id)];
            if (!reached[nst] || nd < dist[nst]) {
                reached[nst] = true;
                dist[nst] = nd;
                pred[nst] = {enc, id};
                pq.push({nd, encode(w, nmask)});
            }
        }
    }

    int end_v = -1;
    if (closure == Closure::Cyclic) {
        size_t target = state_of(v0, s.full);
        if (g.n() > 1 && !reached[target])
            throw std::runtime_error("no cyclic exploration sequence exists");
        end_v = v0;
    } else {
        bool found = false;
        Big best = 0;
        for (int v = 0; v < g.n(); v++) {
            size_t st = state_of(v, s.full);
            if (!reached[st]) continue;
            if (!found || dist[st] < best) {
                found = true;
                best = dist[st];
                end_v = v;
            }
        }
        if (!found) throw std::runtime_error("no exploration sequence exists");
    }

    Walk w;
    w.start = g.start;
    if (g.n() == 1) return w;
    std::vector<int> rev;
    uint32_t enc = encode(end_v, s.full);
    while (true) {
        int v = static_cast<int>(enc & 0xf);
        uint32_t mask = enc >> 4;
        if (v == v0 && mask == start_mask) break;
        size_t st = state_of(v, mask);
        rev.push_back(pred[st].second);
        enc = pred[st].first;
    }
    w.edges.assign(rev.rbegin(), rev.rend());
    return w;
}

}  // namespace

Walk optimal_walk(const Digraph& g, Closure closure) {
    return search(g, closure, perturb(g));
}

Walk optimal_walk_plain(const Digraph& g, Closure closure) {
    std::vector<Big> costs(static_cast<size_t>(g.m()) + 1);
    for (const auto& e : g.edges) costs[static_cast<size_t>(e.id)] = e.cost;
    return search(g, closure, costs);
}

OptimalSolution solve(const Digraph& g, Closure closure) {
    OptimalSolution sol;
    sol.closure = closure;
    sol.walk = optimal_walk(g, closure);
    sol.profile = profile_of(g, sol.walk);
    sol.classes = classify(sol.profile);
    auto seq = walk_vertices(g, sol.walk);
    sol.v_end = seq.back();
    if (closure == Closure::Path) {
        if (sol.v_end == g.start && g.n() > 1)
            throw std::logic_error("open optimum unexpectedly returns to the start");
        std::set<VertexId> seen;
        for (const auto& v : seq) {
            seen.insert(v);
            if (v == sol.v_end) break;
        }
        sol.end_rank = static_cast<int>(seen.size());
    }
    return sol;
}

Classification classify(const TraversalProfile& profile) {
    Classification c(profile.size(), EdgeClass::Zero);
    for (size_t id = 1; id < profile.size(); id++)
        c[id] = profile[id] == 0 ? EdgeClass::Zero
                                 : (profile[id] == 1 ? EdgeClass::One : EdgeClass::Multi);
    return c;
}

std::map<VertexId, int> last_exit(const Digraph& g, const Walk& w) {
    std::map<VertexId, int> last;
    auto seq = walk_vertices(g, w);
    for (size_t i = 0; i < w.edges.size(); i++) last[seq[i]] = w.edges[i];
    return last;
}

void augment_with_closing(Digraph& g, TraversalProfile& profile, const VertexId& v_end) {
    Edge e;
    e.id = g.m() + 1;
    e.src = v_end;
    e.dst = g.start;
    e.cost = 0;
    g.edges.push_back(e);
    g.build_index();
    profile.push_back(1);
}

namespace {

struct UnionFind {
    std::map<VertexId, VertexId> parent;
    VertexId find(const VertexId& v) {
        auto it = parent.find(v);
        if (it == parent.end()) {
            parent[v] = v;
            return v;
        }
        if (it->second == v) return v;
        return parent[v] = find(it->second);
    }
    // Returns false if already connected.
    bool unite(const VertexId& a, const VertexId& b) {
        VertexId ra = find(a), rb = find(b);
        if (ra == rb) return false;
        parent[ra] = rb;
        return true;
    }
};

}  // namespace

ValidationReport validate_structure(const Digraph& g, const TraversalProfile& profile,
                                    const Walk& closed_walk, int virtual_edge_id) {
    ValidationReport r;
    const int n = g.n();
    Classification classes = classify(profile);
    auto cls = [&](int id) { return classes[static_cast<size_t>(id)]; };

    r.no_one_multi_pair = true;
    for (const auto& e1 : g.edges) {
        if (e1.id == virtual_edge_id || cls(e1.id) != EdgeClass::One) continue;
        for (const auto& e2 : g.edges) {
            if (e2.id == virtual_edge_id || cls(e2.id) != EdgeClass::Multi) continue;
            if (e2.src == e1.dst && e2.dst == e1.src) {
                r.no_one_multi_pair = false;
                r.detail += "edge " + std::to_string(e1.id) + " in E1 opposes multi edge " +
                            std::to_string(e2.id) + "; ";
            }
        }
    }

    UnionFind uf;
    r.multi_forest = true;
    for (const auto& e : g.edges)
        if (cls(e.id) == EdgeClass::Multi && !uf.unite(e.src, e.dst)) {
            r.multi_forest = false;
            r.detail += "multi edge " + std::to_string(e.id) + " closes a cycle; ";
        }

    r.max_count_bound = true;
    for (const auto& e : g.edges)
        if (profile[static_cast<size_t>(e.id)] > n) r.max_count_bound = false;

    r.vertex_traversal_bound = true;
    std::map<VertexId, long long> out_traversals;
    for (const auto& v : g.vertices) {
        long long out = 0;
        for (int id : g.out_ids.at(v)) out += profile[static_cast<size_t>(id)];
        out_traversals[v] = out;
        if (out > n) r.vertex_traversal_bound = false;
    }

    // One representative (the vertex with the most outgoing traversals) per
    // tree of the multi forest.
    std::map<VertexId, long long> rep;
    for (const auto& e : g.edges) {
        if (cls(e.id) != EdgeClass::Multi) continue;
        VertexId root = uf.find(e.src);
        long long best = std::max(out_traversals[e.src], out_traversals[e.dst]);
        auto it = rep.find(root);
        if (it == rep.end()) rep[root] = best;
        else it->second = std::max(it->second, best);
    }
    long long rep_sum = 0;
    for (const auto& [root, c] : rep) rep_sum += c;
    r.representative_sum = rep_sum <= g.m() - (virtual_edge_id != 0 ? 1 : 0);

    // Constructive decomposition into edge-disjoint closed subwalks: each
    // return to the start vertex closes one excursion.  Every excursion of an
    // optimal solution must discover at least one new vertex, so an optimal
    // walk never needs more than n of them.
    auto seq = walk_vertices(g, closed_walk);
    int cycles = 0;
    for (size_t i = 1; i < seq.size(); i++)
        if (seq[i] == seq.front()) cycles++;
    r.cycle_decomposition = cycles <= n;
    if (!r.cycle_decomposition) r.detail += "walk needs " + std::to_string(cycles) + " cycles; ";
    return r;
}

bool is_expandable(const Digraph& g, const TraversalProfile& profile, const Walk& prefix,
                   const VertexId& v_end) {
    TraversalProfile used = profile_of(g, prefix);
    std::vector<long long> residual(profile.size());
    bool any = false;
    for (size_t id = 1; id < profile.size(); id++) {
        residual[id] = profile[id] - used[id];
        if (residual[id] < 0) throw std::runtime_error("prefix exceeds the solution profile");
        if (residual[id] > 0) any = true;
    }
    auto seq = walk_vertices(g, prefix);
    const VertexId& at = seq.back();
    if (!any) return false;

    bool usable_out = false;
    for (int id : g.out_ids.at(at))
        if (residual[static_cast<size_t>(id)] > 0) usable_out = true;
    if (!usable_out) return false;

    // Balance: residual must admit an Euler path from `at` to v_end.
    std::map<VertexId, long long> d;
    for (const auto& e : g.edges) {
        d[e.src] += residual[static_cast<size_t>(e.id)];
        d[e.dst] -= residual[static_cast<size_t>(e.id)];
    }
    for (const auto& v : g.vertices) {
        long long want = 0;
        if (at != v_end) want = (v == at) ? 1 : (v == v_end ? -1 : 0);
        if (d[v] != want) return false;
    }

    // Weak connectivity of all residual edges together with the endpoint.
    UnionFind uf;
    uf.find(at);
    for (const auto& e : g.edges)
        if (residual[static_cast<size_t>(e.id)] > 0) uf.unite(e.src, e.dst);
    for (const auto& e : g.edges)
        if (residual[static_cast<size_t>(e.id)] > 0 && uf.find(e.src) != uf.find(at)) return false;

    // Unvisited vertices must still be coverable.
    std::set<VertexId> visited(seq.begin(), seq.end());
    for (const auto& v : g.vertices) {
        if (visited.count(v)) continue;
        long long deg = 0;
        for (int id : g.out_ids.at(v)) deg += residual[static_cast<size_t>(id)];
        for (int id : g.in_ids.at(v)) deg += residual[static_cast<size_t>(id)];
        if (deg == 0) return false;
    }
    return true;
}

}  // namespace advex
