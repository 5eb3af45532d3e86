#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "advex/graph.hpp"

namespace advex {

// Shape of a compact binary tree distributing k >= 3 edge slots: positions
// 0..k-2 are nodes (0 is the real root), positions k-1..2k-2 are slots, and
// position p has children 2p+1 and 2p+2. Slots are assigned to edges in
// left-to-right order so that every subtree covers a contiguous slot range.
struct TreeLayout {
    int k = 0;
    std::vector<int> slot_order;                 // slot positions, left to right
    std::vector<std::pair<int, int>> range;      // per position: [lo,hi] slot-order range under it

    int nodes() const { return k - 1; }          // including the root at position 0
    int virtuals() const { return k - 2; }
    static int parent(int pos) { return (pos - 1) / 2; }
    bool is_slot(int pos) const { return pos >= k - 1; }
    int slot_rank(int pos) const;                // left-to-right index of a slot position
};

TreeLayout make_layout(int k);

VertexId virtual_id(const VertexId& owner, bool out_side, int node_pos);

struct InOutTree {
    VertexId root;
    int used_in = 0;
    int used_out = 0;
    TreeLayout in_layout;   // valid when used_in >= 3
    TreeLayout out_layout;  // valid when used_out >= 3
    int virtual_vertices() const;

    // Attachment vertex of the i-th in/out edge (by the caller's order): the
    // root itself when no tree is needed, else the owning tree node.
    VertexId in_attachment(int index) const;
    VertexId out_attachment(int index) const;
};

InOutTree build_inout_tree(const VertexId& v, int used_in, int used_out);

struct HEdge {
    int id = 0;
    VertexId src;
    VertexId dst;
    long long cost = 0;
    int real_id = 0;  // 0 for virtual tree edges
};

struct BoundedGraph {
    std::vector<VertexId> vertices;  // real vertices first, then virtual ones
    std::vector<HEdge> edges;
    std::map<VertexId, VertexId> origin;  // virtual vertex -> owning real vertex
    std::map<int, int> real_to_h;         // real edge id -> H edge id
    VertexId start;

    int n() const { return static_cast<int>(vertices.size()); }
    int m() const { return static_cast<int>(edges.size()); }
    const HEdge& edge(int id) const { return edges[static_cast<size_t>(id - 1)]; }
    int virtual_vertex_count() const { return static_cast<int>(origin.size()); }
};

// Replace every vertex of the used subgraph (profile count >= 1) that has more
// than two used outgoing or incoming edges by an in-out-tree. Edge slots are
// assigned in sorted (other endpoint id, edge id) order. Virtual edges cost 0.
BoundedGraph transform_used(const Digraph& g, const TraversalProfile& profile);

// Used edges at v under the profile, in canonical (other endpoint id, edge id)
// order; the slot assignment order of transform_used.
std::vector<int> sorted_used_out(const Digraph& g, const TraversalProfile& profile,
                                 const VertexId& v);
std::vector<int> sorted_used_in(const Digraph& g, const TraversalProfile& profile,
                                const VertexId& v);

// Traversal counts on H induced by the original profile: transformed real
// edges keep their count, virtual edges aggregate the slots below them.
std::vector<int> h_profile(const BoundedGraph& h, const Digraph& g, const TraversalProfile& profile);

// Contract virtual subpaths back to original edges; the result has equal cost.
Walk map_walk_back(const BoundedGraph& h, const Digraph& g, const Walk& h_walk);

}  // namespace advex
