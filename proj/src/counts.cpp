#include "advex/counts.hpp"

#include <algorithm>
#include <stdexcept>

namespace advex {

long long balance_resolve(long long known_in, long long known_out, bool unknown_outgoing,
                          long long target) {
    long long x = unknown_outgoing ? known_in - known_out + target
                                   : known_out - known_in - target;
    if (x <= 0)
        throw std::runtime_error("balance resolves to a nonpositive traversal count");
    return x;
}

TraversalProfile solve_counts_with_picker(
    const Digraph& g, const Classification& classes,
    const std::map<VertexId, long long>& imbalance,
    const std::function<VertexId(const std::vector<VertexId>&)>& pick_leaf) {
    TraversalProfile counts(static_cast<size_t>(g.m()) + 1, 0);
    std::vector<bool> unknown(static_cast<size_t>(g.m()) + 1, false);
    size_t open = 0;
    for (int id = 1; id <= g.m(); id++) {
        switch (classes[static_cast<size_t>(id)]) {
            case EdgeClass::Zero: counts[static_cast<size_t>(id)] = 0; break;
            case EdgeClass::One: counts[static_cast<size_t>(id)] = 1; break;
            case EdgeClass::Multi:
                unknown[static_cast<size_t>(id)] = true;
                open++;
                break;
        }
    }

    auto target = [&](const VertexId& v) {
        auto it = imbalance.find(v);
        return it == imbalance.end() ? 0LL : it->second;
    };

    while (open > 0) {
        std::map<VertexId, std::vector<int>> deg;
        for (int id = 1; id <= g.m(); id++) {
            if (!unknown[static_cast<size_t>(id)]) continue;
            deg[g.edge(id).src].push_back(id);
            deg[g.edge(id).dst].push_back(id);
        }
        std::vector<VertexId> leaves;
        for (const auto& [v, ids] : deg)
            if (ids.size() == 1) leaves.push_back(v);
        if (leaves.empty())
            throw std::runtime_error("Multi edges contain an undirected cycle");

        VertexId v = pick_leaf(leaves);
        int id = deg[v].front();
        long long in = 0, out = 0;
        for (const auto& e : g.edges) {
            if (e.id == id) continue;
            if (e.src == v) out += counts[static_cast<size_t>(e.id)];
            if (e.dst == v) in += counts[static_cast<size_t>(e.id)];
        }
        long long x = balance_resolve(in, out, g.edge(id).src == v, target(v));
        if (x < 2)
            throw std::runtime_error("balance forces a Multi count below 2");
        counts[static_cast<size_t>(id)] = x;
        unknown[static_cast<size_t>(id)] = false;
        open--;
    }

    for (const auto& [v, d] : imbalance_of(g, counts))
        if (d != target(v))
            throw std::runtime_error("classification admits no balanced assignment");
    return counts;
}

TraversalProfile solve_counts(const Digraph& g, const Classification& classes,
                              const std::map<VertexId, long long>& imbalance) {
    return solve_counts_with_picker(g, classes, imbalance,
                                    [](const std::vector<VertexId>& leaves) {
                                        return *std::min_element(leaves.begin(), leaves.end());
                                    });
}

}  // namespace advex
