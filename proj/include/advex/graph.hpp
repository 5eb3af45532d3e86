#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace advex {

using Big = boost::multiprecision::cpp_int;
using VertexId = std::string;

// Edge ids are 1-based and follow the order of appearance in the instance
// document; the perturbation depends on this order.
struct Edge {
    int id = 0;
    VertexId src;
    VertexId dst;
    long long cost = 0;
};

struct Digraph {
    bool directed = true;
    VertexId start;
    std::vector<VertexId> vertices;
    std::vector<Edge> edges;

    std::map<VertexId, std::vector<int>> out_ids;  // edge ids leaving v (undirected: src side)
    std::map<VertexId, std::vector<int>> in_ids;   // edge ids entering v (undirected: dst side)

    int n() const { return static_cast<int>(vertices.size()); }
    int m() const { return static_cast<int>(edges.size()); }
    const Edge& edge(int id) const { return edges[static_cast<size_t>(id - 1)]; }
    bool has_vertex(const VertexId& v) const;
    void build_index();
    void validate() const;

    // All edge ids incident to v with v as tail (directed) or either endpoint
    // (undirected), in id order.
    std::vector<int> incident_out(const VertexId& v) const;
};

struct Walk {
    VertexId start;
    std::vector<int> edges;  // edge ids in traversal order

    size_t length() const { return edges.size(); }
};

// Traversal counts indexed by edge id; entry 0 is unused.
using TraversalProfile = std::vector<int>;

Digraph parse_graph(const std::string& json_text);
std::string serialize_graph(const Digraph& g);
Digraph load_graph(const std::string& path);

// Exact perturbed cost per edge: cost_i * m^(2m) + m^(2m-2i), indexed by edge id.
std::vector<Big> perturb(const Digraph& g);

long long walk_cost(const Digraph& g, const Walk& w);
Big walk_cost_perturbed(const Digraph& g, const std::vector<Big>& pert, const Walk& w);
TraversalProfile profile_of(const Digraph& g, const Walk& w);

// Vertex sequence of the walk, starting with w.start. For undirected graphs the
// direction of each step is inferred from the current position.
std::vector<VertexId> walk_vertices(const Digraph& g, const Walk& w);

// d_delta(v) = out-traversals - in-traversals under the given profile.
std::map<VertexId, long long> imbalance_of(const Digraph& g, const TraversalProfile& p);

bool is_strongly_connected(const Digraph& g);
bool is_connected(const Digraph& g);

// Replace each undirected edge {v,w} (id i) by directed copies (v,w) with id
// 2i-1 and (w,v) with id 2i. mate(id) pairs the two copies.
Digraph double_orient(const Digraph& g);
inline int mate(int doubled_id) { return (doubled_id % 2 == 1) ? doubled_id + 1 : doubled_id - 1; }
inline int original_of(int doubled_id) { return (doubled_id + 1) / 2; }

// Forget orientations: directed edge (v,w) becomes undirected {v,w}, same ids.
Digraph drop_orientation(const Digraph& g);

}  // namespace advex
