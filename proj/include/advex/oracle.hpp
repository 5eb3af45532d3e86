#pragma once

#include <map>
#include <string>

#include "advex/counts.hpp"
#include "advex/graph.hpp"

namespace advex {

enum class Closure { Cyclic, Path };

struct OptimalSolution {
    Walk walk;
    TraversalProfile profile;
    Classification classes;
    Closure closure = Closure::Cyclic;
    VertexId v_end;     // equals the start vertex for cyclic solutions
    int end_rank = 0;   // distinct vertices seen when v_end is first visited (path only)
};

inline constexpr int kExactSearchLimit = 16;

// Minimum perturbed-cost exploration sequence via least-cost search over
// (vertex, visited-set) states. Deterministic: priority ties broken by smaller
// state encoding, edges relaxed in id order, predecessors updated only on
// strict improvement.
Walk optimal_walk(const Digraph& g, Closure closure);

// Same search on the raw (unperturbed) costs; used where any optimal tour is
// acceptable and no advice is involved.
Walk optimal_walk_plain(const Digraph& g, Closure closure);

OptimalSolution solve(const Digraph& g, Closure closure);

Classification classify(const TraversalProfile& profile);

// Edge id of the final departure from each vertex in the walk.
std::map<VertexId, int> last_exit(const Digraph& g, const Walk& w);

// Append the virtual closing edge (v_end, start) with id m+1 and cost 0 to the
// graph, and a count of 1 to the profile, turning a path solution Eulerian.
void augment_with_closing(Digraph& g, TraversalProfile& profile, const VertexId& v_end);

struct ValidationReport {
    bool multi_forest = false;        // Multi edges are acyclic as an undirected graph
    bool no_one_multi_pair = false;   // no (v,w) in E1 with (w,v) in EMulti
    bool max_count_bound = false;     // every count <= n
    bool vertex_traversal_bound = false;  // per-vertex traversals <= n
    bool representative_sum = false;  // sum of one max representative per tree <= m
    bool cycle_decomposition = false; // walk decomposes into <= n edge-disjoint cycles
    std::string detail;

    bool all() const {
        return multi_forest && no_one_multi_pair && max_count_bound &&
               vertex_traversal_bound && representative_sum && cycle_decomposition;
    }
};

// Structural checks on a closed solution (path solutions: augment first and
// pass the closing edge id to exempt it from the opposite-pair check).
ValidationReport validate_structure(const Digraph& g, const TraversalProfile& profile,
                                    const Walk& closed_walk, int virtual_edge_id = 0);

// True iff the prefix can still be completed to a walk consuming exactly the
// remaining profile: a usable outgoing edge exists, the residual multigraph is
// balanced toward the end vertex and weakly connected, and no unvisited vertex
// has been cut off.
bool is_expandable(const Digraph& g, const TraversalProfile& profile, const Walk& prefix,
                   const VertexId& v_end);

}  // namespace advex
