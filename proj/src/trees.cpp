#include "advex/trees.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace advex {

TreeLayout make_layout(int k) {
    if (k < 3) throw std::logic_error("tree layout needs at least 3 slots");
    TreeLayout t;
    t.k = k;
    int total = 2 * k - 1;
    t.range.assign(static_cast<size_t>(total), {0, -1});
    std::function<void(int)> dfs = [&](int pos) {
        if (t.is_slot(pos)) {
            int rank = static_cast<int>(t.slot_order.size());
            t.slot_order.push_back(pos);
            t.range[static_cast<size_t>(pos)] = {rank, rank};
            return;
        }
        dfs(2 * pos + 1);
        dfs(2 * pos + 2);
        t.range[static_cast<size_t>(pos)] = {t.range[static_cast<size_t>(2 * pos + 1)].first,
                                             t.range[static_cast<size_t>(2 * pos + 2)].second};
    };
    dfs(0);
    return t;
}

int TreeLayout::slot_rank(int pos) const {
    return range[static_cast<size_t>(pos)].first;
}

VertexId virtual_id(const VertexId& owner, bool out_side, int node_pos) {
    return "~" + owner + (out_side ? ":out:" : ":in:") + std::to_string(node_pos);
}

int InOutTree::virtual_vertices() const {
    return (used_in >= 3 ? used_in - 2 : 0) + (used_out >= 3 ? used_out - 2 : 0);
}

VertexId InOutTree::in_attachment(int index) const {
    if (used_in < 3) return root;
    int parent = TreeLayout::parent(in_layout.slot_order[static_cast<size_t>(index)]);
    return parent == 0 ? root : virtual_id(root, false, parent);
}

VertexId InOutTree::out_attachment(int index) const {
    if (used_out < 3) return root;
    int parent = TreeLayout::parent(out_layout.slot_order[static_cast<size_t>(index)]);
    return parent == 0 ? root : virtual_id(root, true, parent);
}

InOutTree build_inout_tree(const VertexId& v, int used_in, int used_out) {
    InOutTree t;
    t.root = v;
    t.used_in = used_in;
    t.used_out = used_out;
    if (used_in >= 3) t.in_layout = make_layout(used_in);
    if (used_out >= 3) t.out_layout = make_layout(used_out);
    return t;
}

std::vector<int> sorted_used_out(const Digraph& g, const TraversalProfile& profile,
                                 const VertexId& v) {
    std::vector<int> ids;
    for (const auto& e : g.edges)
        if (e.src == v && profile[static_cast<size_t>(e.id)] > 0) ids.push_back(e.id);
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        const Edge &ea = g.edge(a), &eb = g.edge(b);
        return std::tie(ea.dst, a) < std::tie(eb.dst, b);
    });
    return ids;
}

std::vector<int> sorted_used_in(const Digraph& g, const TraversalProfile& profile,
                                const VertexId& v) {
    std::vector<int> ids;
    for (const auto& e : g.edges)
        if (e.dst == v && profile[static_cast<size_t>(e.id)] > 0) ids.push_back(e.id);
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        const Edge &ea = g.edge(a), &eb = g.edge(b);
        return std::tie(ea.src, a) < std::tie(eb.src, b);
    });
    return ids;
}

BoundedGraph transform_used(const Digraph& g, const TraversalProfile& profile) {
    if (!g.directed) throw std::logic_error("transform_used expects a directed graph");
    BoundedGraph h;
    h.start = g.start;
    std::map<VertexId, InOutTree> trees;
    std::map<VertexId, std::vector<int>> used_out, used_in;
    for (const auto& v : g.vertices) {
        used_out[v] = sorted_used_out(g, profile, v);
        used_in[v] = sorted_used_in(g, profile, v);
        if (used_out[v].empty() || used_in[v].empty())
            throw std::runtime_error("used subgraph leaves vertex " + v + " isolated");
        trees[v] = build_inout_tree(v, static_cast<int>(used_in[v].size()),
                                    static_cast<int>(used_out[v].size()));
    }

    h.vertices = g.vertices;
    for (const auto& v : g.vertices) {
        const InOutTree& t = trees[v];
        for (int pos = 1; pos <= t.used_out - 2; pos++) {
            h.vertices.push_back(virtual_id(v, true, pos));
            h.origin[h.vertices.back()] = v;
        }
        for (int pos = 1; pos <= t.used_in - 2; pos++) {
            h.vertices.push_back(virtual_id(v, false, pos));
            h.origin[h.vertices.back()] = v;
        }
    }

    int next_id = 1;
    for (const auto& e : g.edges) {
        if (profile[static_cast<size_t>(e.id)] == 0) continue;
        const auto& outs = used_out[e.src];
        const auto& ins = used_in[e.dst];
        int out_rank = static_cast<int>(std::find(outs.begin(), outs.end(), e.id) - outs.begin());
        int in_rank = static_cast<int>(std::find(ins.begin(), ins.end(), e.id) - ins.begin());
        HEdge he;
        he.id = next_id++;
        he.src = trees[e.src].out_attachment(out_rank);
        he.dst = trees[e.dst].in_attachment(in_rank);
        he.cost = e.cost;
        he.real_id = e.id;
        h.real_to_h[e.id] = he.id;
        h.edges.push_back(std::move(he));
    }
    for (const auto& v : g.vertices) {
        const InOutTree& t = trees[v];
        if (t.used_out >= 3)
            for (int pos = 1; pos <= t.used_out - 2; pos++) {
                int par = TreeLayout::parent(pos);
                HEdge he;
                he.id = next_id++;
                he.src = par == 0 ? v : virtual_id(v, true, par);
                he.dst = virtual_id(v, true, pos);
                h.edges.push_back(std::move(he));
            }
        if (t.used_in >= 3)
            for (int pos = 1; pos <= t.used_in - 2; pos++) {
                int par = TreeLayout::parent(pos);
                HEdge he;
                he.id = next_id++;
                he.src = virtual_id(v, false, pos);
                he.dst = par == 0 ? v : virtual_id(v, false, par);
                h.edges.push_back(std::move(he));
            }
    }
    return h;
}

std::vector<int> h_profile(const BoundedGraph& h, const Digraph& g,
                           const TraversalProfile& profile) {
    std::vector<int> hp(static_cast<size_t>(h.m()) + 1, 0);
    std::map<VertexId, InOutTree> trees;
    std::map<VertexId, std::vector<int>> used_out, used_in;
    for (const auto& v : g.vertices) {
        used_out[v] = sorted_used_out(g, profile, v);
        used_in[v] = sorted_used_in(g, profile, v);
        trees[v] = build_inout_tree(v, static_cast<int>(used_in[v].size()),
                                    static_cast<int>(used_out[v].size()));
    }
    auto subtree_sum = [&](const TreeLayout& layout, const std::vector<int>& slots, int pos) {
        auto [lo, hi] = layout.range[static_cast<size_t>(pos)];
        int sum = 0;
        for (int i = lo; i <= hi; i++) sum += profile[static_cast<size_t>(slots[static_cast<size_t>(i)])];
        return sum;
    };
    for (const auto& he : h.edges) {
        if (he.real_id != 0) {
            hp[static_cast<size_t>(he.id)] = profile[static_cast<size_t>(he.real_id)];
            continue;
        }
        // Virtual edge: the child endpoint is the dst for out-trees (root to
        // leaves) and the src for in-trees (leaves to root).
        bool out_side = he.dst.find(":out:") != std::string::npos;
        const VertexId& child = out_side ? he.dst : he.src;
        VertexId owner = h.origin.at(child);
        int pos = std::stoi(child.substr(child.rfind(':') + 1));
        const InOutTree& t = trees.at(owner);
        hp[static_cast<size_t>(he.id)] =
            out_side ? subtree_sum(t.out_layout, used_out.at(owner), pos)
                     : subtree_sum(t.in_layout, used_in.at(owner), pos);
    }
    return hp;
}

Walk map_walk_back(const BoundedGraph& h, const Digraph& g, const Walk& h_walk) {
    if (!h_walk.start.empty() && h_walk.start[0] == '~')
        throw std::runtime_error("H walk starts at a virtual vertex");
    Walk w;
    w.start = h_walk.start;
    for (int id : h_walk.edges) {
        const HEdge& he = h.edge(id);
        if (he.real_id != 0) w.edges.push_back(he.real_id);
    }
    walk_vertices(g, w);  // validates continuity
    return w;
}

}  // namespace advex
