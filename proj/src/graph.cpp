#include "advex/graph.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace advex {

bool Digraph::has_vertex(const VertexId& v) const {
    return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

void Digraph::build_index() {
    out_ids.clear();
    in_ids.clear();
    for (const auto& v : vertices) {
        out_ids[v];
        in_ids[v];
    }
    for (const auto& e : edges) {
        out_ids[e.src].push_back(e.id);
        in_ids[e.dst].push_back(e.id);
    }
}

void Digraph::validate() const {
    if (vertices.empty()) throw std::runtime_error("instance has no vertices");
    std::set<VertexId> seen(vertices.begin(), vertices.end());
    if (seen.size() != vertices.size()) throw std::runtime_error("duplicate vertex id");
    if (!seen.count(start)) throw std::runtime_error("start vertex not in vertex list");
    for (const auto& e : edges) {
        if (!seen.count(e.src) || !seen.count(e.dst))
            throw std::runtime_error("edge endpoint not in vertex list: edge " + std::to_string(e.id));
        if (e.src == e.dst)
            throw std::runtime_error("self-loop rejected: edge " + std::to_string(e.id));
        if (e.cost < 0)
            throw std::runtime_error("negative cost rejected: edge " + std::to_string(e.id));
    }
}

std::vector<int> Digraph::incident_out(const VertexId& v) const {
    std::vector<int> ids;
    if (directed) {
        auto it = out_ids.find(v);
        if (it != out_ids.end()) ids = it->second;
    } else {
        for (const auto& e : edges)
            if (e.src == v || e.dst == v) ids.push_back(e.id);
    }
    return ids;
}

Digraph parse_graph(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& ex) {
        throw std::runtime_error(std::string("instance is not valid JSON: ") + ex.what());
    }
    Digraph g;
    try {
        g.directed = doc.at("directed").get<bool>();
        g.start = doc.at("start").get<std::string>();
        g.vertices = doc.at("vertices").get<std::vector<std::string>>();
        int next_id = 1;
        for (const auto& je : doc.at("edges")) {
            Edge e;
            e.id = next_id++;
            e.src = je.at("src").get<std::string>();
            e.dst = je.at("dst").get<std::string>();
            e.cost = je.at("cost").get<long long>();
            g.edges.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw std::runtime_error(std::string("instance document malformed: ") + ex.what());
    }
    g.validate();
    g.build_index();
    return g;
}

std::string serialize_graph(const Digraph& g) {
    nlohmann::json doc;
    doc["directed"] = g.directed;
    doc["start"] = g.start;
    doc["vertices"] = g.vertices;
    doc["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges)
        doc["edges"].push_back({{"src", e.src}, {"dst", e.dst}, {"cost", e.cost}});
    return doc.dump(2);
}

Digraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str());
}

std::vector<Big> perturb(const Digraph& g) {
    const int m = g.m();
    if (m == 0) return {};
    Big base = 1;
    for (int i = 0; i < 2 * m; i++) base *= m;  // m^(2m)
    std::vector<Big> out(static_cast<size_t>(m) + 1);
    Big tail = base;  // m^(2m-2i) for the current i
    const Big msq = Big(m) * m;
    for (int i = 1; i <= m; i++) {
        tail /= msq;
        out[static_cast<size_t>(i)] = Big(g.edge(i).cost) * base + tail;
    }
    return out;
}

long long walk_cost(const Digraph& g, const Walk& w) {
    long long c = 0;
    for (int id : w.edges) c += g.edge(id).cost;
    return c;
}

Big walk_cost_perturbed(const Digraph& g, const std::vector<Big>& pert, const Walk& w) {
    (void)g;
    Big c = 0;
    for (int id : w.edges) c += pert[static_cast<size_t>(id)];
    return c;
}

TraversalProfile profile_of(const Digraph& g, const Walk& w) {
    TraversalProfile p(static_cast<size_t>(g.m()) + 1, 0);
    for (int id : w.edges) p[static_cast<size_t>(id)]++;
    return p;
}

std::vector<VertexId> walk_vertices(const Digraph& g, const Walk& w) {
    std::vector<VertexId> seq{w.start};
    VertexId at = w.start;
    for (int id : w.edges) {
        const Edge& e = g.edge(id);
        if (g.directed) {
            if (e.src != at)
                throw std::runtime_error("walk discontinuous at edge " + std::to_string(id));
            at = e.dst;
        } else {
            if (e.src == at)
                at = e.dst;
            else if (e.dst == at)
                at = e.src;
            else
                throw std::runtime_error("walk discontinuous at edge " + std::to_string(id));
        }
        seq.push_back(at);
    }
    return seq;
}

std::map<VertexId, long long> imbalance_of(const Digraph& g, const TraversalProfile& p) {
    std::map<VertexId, long long> d;
    for (const auto& v : g.vertices) d[v] = 0;
    for (const auto& e : g.edges) {
        long long c = p[static_cast<size_t>(e.id)];
        d[e.src] += c;
        d[e.dst] -= c;
    }
    return d;
}

namespace {

size_t reach_count(const Digraph& g, const VertexId& from, bool reversed) {
    std::set<VertexId> seen{from};
    std::vector<VertexId> stack{from};
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (const auto& e : g.edges) {
            VertexId next;
            if (g.directed) {
                if (!reversed && e.src == v)
                    next = e.dst;
                else if (reversed && e.dst == v)
                    next = e.src;
                else
                    continue;
            } else {
                if (e.src == v)
                    next = e.dst;
                else if (e.dst == v)
                    next = e.src;
                else
                    continue;
            }
            if (seen.insert(next).second) stack.push_back(next);
        }
    }
    return seen.size();
}

}  // namespace

bool is_strongly_connected(const Digraph& g) {
    if (!g.directed) throw std::runtime_error("is_strongly_connected expects a directed graph");
    if (g.vertices.empty()) return false;
    size_t nn = g.vertices.size();
    return reach_count(g, g.vertices.front(), false) == nn &&
           reach_count(g, g.vertices.front(), true) == nn;
}

bool is_connected(const Digraph& g) {
    if (g.directed) throw std::runtime_error("is_connected expects an undirected graph");
    if (g.vertices.empty()) return false;
    return reach_count(g, g.vertices.front(), false) == g.vertices.size();
}

Digraph double_orient(const Digraph& g) {
    if (g.directed) throw std::runtime_error("double_orient expects an undirected graph");
    Digraph d;
    d.directed = true;
    d.start = g.start;
    d.vertices = g.vertices;
    for (const auto& e : g.edges) {
        d.edges.push_back(Edge{2 * e.id - 1, e.src, e.dst, e.cost});
        d.edges.push_back(Edge{2 * e.id, e.dst, e.src, e.cost});
    }
    d.build_index();
    d.validate();
    return d;
}

Digraph drop_orientation(const Digraph& g) {
    if (!g.directed) throw std::runtime_error("drop_orientation expects a directed graph");
    Digraph u = g;
    u.directed = false;
    u.build_index();
    u.validate();
    return u;
}

}  // namespace advex
