#pragma once

#include <functional>
#include <map>

#include "advex/graph.hpp"

namespace advex {

enum class EdgeClass : int { Zero = 0, One = 1, Multi = 2 };

using Classification = std::vector<EdgeClass>;  // indexed by edge id, entry 0 unused

// Resolve the single unknown count at a vertex from flow balance:
// out-traversals - in-traversals must equal target. Throws if the forced count
// is not positive.
long long balance_resolve(long long known_in, long long known_out, bool unknown_outgoing,
                          long long target);

// Recover the full traversal profile from the edge classification alone by
// peeling leaves of the forest formed by the Multi edges. target imbalance is
// all zeros for cyclic solutions, +1 at the start and -1 at the end vertex for
// open paths. Throws if the Multi edges contain an undirected cycle or balance
// forces a Multi count below 2.
TraversalProfile solve_counts(const Digraph& g, const Classification& classes,
                              const std::map<VertexId, long long>& imbalance);

// Same, with the leaf choice delegated (used to test order independence).
TraversalProfile solve_counts_with_picker(
    const Digraph& g, const Classification& classes,
    const std::map<VertexId, long long>& imbalance,
    const std::function<VertexId(const std::vector<VertexId>&)>& pick_leaf);

}  // namespace advex
