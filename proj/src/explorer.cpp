#include "advex/explorer.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "advex/counts.hpp"
#include "advex/trees.hpp"

namespace advex {

std::string VariantConfig::name() const {
    std::string s = known ? "known-" : "unknown-";
    s += directed ? "directed-" : "undirected-";
    s += path ? "path" : "cyclic";
    if (unit) s += "-unit";
    return s;
}

VariantConfig parse_variant(const std::string& name) {
    VariantConfig vc;
    std::string rest = name;
    auto eat = [&](const std::string& prefix) {
        if (rest.rfind(prefix, 0) != 0) return false;
        rest = rest.substr(prefix.size());
        return true;
    };
    if (eat("known-"))
        vc.known = true;
    else if (eat("unknown-"))
        vc.known = false;
    else
        throw std::runtime_error("unknown variant: " + name);
    if (eat("directed-"))
        vc.directed = true;
    else if (eat("undirected-"))
        vc.directed = false;
    else
        throw std::runtime_error("unknown variant: " + name);
    if (rest == "cyclic")
        vc.path = false;
    else if (rest == "path")
        vc.path = true;
    else if (rest == "cyclic-unit")
        vc.unit = true;
    else if (rest == "path-unit") {
        vc.path = true;
        vc.unit = true;
    } else
        throw std::runtime_error("unknown variant: " + name);
    if (vc.unit && !vc.known) throw std::runtime_error("unit mode requires a known variant: " + name);
    return vc;
}

std::vector<VariantConfig> all_variants() {
    std::vector<VariantConfig> v;
    for (bool known : {false, true})
        for (bool directed : {true, false})
            for (bool path : {false, true}) v.push_back(VariantConfig{known, directed, path, false});
    return v;
}

namespace {

int rank_field_width(int n) {
    if (n < 3) return 0;  // a single possible end rank
    return std::bit_width(static_cast<unsigned>(n - 2));
}

int index_field_width(int n) { return std::bit_width(static_cast<unsigned>(n - 1)); }

// ---------------------------------------------------------------------------
// Fog-of-war environment: reveals outgoing (directed) or incident (undirected)
// edges of visited vertices only, and accounts every traversal.
// ---------------------------------------------------------------------------

class Env {
  public:
    explicit Env(const Digraph& g) : g_(g) { visited_.insert(g.start); }

    const Digraph& graph() const { return g_; }
    const VertexId& start() const { return g_.start; }
    int n() const { return g_.n(); }
    bool visited(const VertexId& v) const { return visited_.count(v) > 0; }
    int visited_count() const { return static_cast<int>(visited_.size()); }

    std::vector<Edge> observe(const VertexId& v) const {
        require_visited(v);
        std::vector<Edge> out;
        for (int id : g_.incident_out(v)) out.push_back(g_.edge(id));
        std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
        return out;
    }

    VertexId move(const VertexId& from, int edge_id) {
        require_visited(from);
        const Edge& e = g_.edge(edge_id);
        VertexId to;
        if (g_.directed) {
            if (e.src != from) throw std::logic_error("explorer used a non-outgoing edge");
            to = e.dst;
        } else {
            if (e.src == from)
                to = e.dst;
            else if (e.dst == from)
                to = e.src;
            else
                throw std::logic_error("explorer used a non-incident edge");
        }
        trail_.push_back(edge_id);
        visited_.insert(to);
        return to;
    }

    const std::vector<int>& trail() const { return trail_; }

  private:
    void require_visited(const VertexId& v) const {
        if (!visited(v)) throw std::logic_error("explorer accessed an unvisited vertex: " + v);
    }

    const Digraph& g_;
    std::set<VertexId> visited_;
    std::vector<int> trail_;
};

// ---------------------------------------------------------------------------
// Advice channel: one protocol, two sources. The replaying channel decodes a
// tape; the recording channel answers from the offline solution and lays the
// identical bits onto a builder, deferring values that depend on the not yet
// determined future of the run (the end rank, per-slot incoming classes).
// ---------------------------------------------------------------------------

struct InStreamSummary {
    int zero = 0, one = 0, multi = 0;
    int total() const { return zero + one + multi; }
};

// One member of a two-way comparison at a bounded-degree vertex: the real
// edges known to contribute, plus placeholders for incoming edges whose
// identity the explorer has not yet learned.
struct PairSide {
    std::vector<int> proto_ids;
    long long forced = 0;        // counts fixed by balance before identity is known
    int pending_one = 0;         // unidentified single-use entries (1 each)
    bool pending_multi_all = false;  // covers every unidentified multi entry of the vertex
};

class Channel {
  public:
    virtual ~Channel() = default;
    virtual void begin() {}
    virtual bool end_trigger(const VertexId& v, int rank) = 0;
    virtual std::vector<EdgeClass> out_block(const std::vector<int>& proto_ids) = 0;
    virtual std::vector<int> six_block(const VertexId& at, const std::vector<int>& instance_ids) = 0;
    virtual InStreamSummary in_stream(const VertexId& v) = 0;
    virtual EdgeClass bind_in(const VertexId& v, int proto_id) = 0;
    virtual std::pair<bool, long long> light_query(const VertexId& cluster_v, const PairSide& a,
                                                   const PairSide& b) = 0;
    virtual bool last_query(const PairSide& a, const PairSide& b) = 0;
    virtual void note_visit(const VertexId&) {}
    virtual void note_move(int) {}
    virtual long long bits() const = 0;
};

int six_symbol(int fwd, int bwd) {
    if (fwd == 0 && bwd == 0) return 0;
    if (fwd == 1 && bwd == 0) return 1;
    if (fwd == 0 && bwd == 1) return 2;
    if (fwd == 1 && bwd == 1) return 3;
    if (fwd > 1 && bwd == 0) return 4;
    if (fwd == 0 && bwd > 1) return 5;
    throw std::logic_error("undirected edge uses both directions more than once");
}

std::pair<EdgeClass, EdgeClass> six_classes(int symbol) {
    switch (symbol) {
        case 0: return {EdgeClass::Zero, EdgeClass::Zero};
        case 1: return {EdgeClass::One, EdgeClass::Zero};
        case 2: return {EdgeClass::Zero, EdgeClass::One};
        case 3: return {EdgeClass::One, EdgeClass::One};
        case 4: return {EdgeClass::Multi, EdgeClass::Zero};
        case 5: return {EdgeClass::Zero, EdgeClass::Multi};
        default: throw std::runtime_error("invalid six-way classification symbol");
    }
}

class RecordChannel : public Channel {
  public:
    RecordChannel(const Digraph& ga, TraversalProfile prof, std::vector<int> last_pos,
                  int closing_id, bool path, const VertexId& v_end, int n)
        : ga_(ga),
          prof_(std::move(prof)),
          last_pos_(std::move(last_pos)),
          closing_id_(closing_id),
          path_(path),
          v_end_(v_end),
          rank_width_(path ? rank_field_width(n) : 0) {
        classes_ = classify(prof_);
        used_.assign(prof_.size(), 0);
    }

    void begin() override {
        if (path_) rank_pos_ = tb_.reserve(static_cast<size_t>(rank_width_));
    }

    bool end_trigger(const VertexId& v, int rank) override {
        if (v != v_end_) return false;
        if (rank_width_ > 0)
            tb_.fill(rank_pos_, AdviceTape::encode_fixed(rank - 2, rank_width_));
        return true;
    }

    std::vector<EdgeClass> out_block(const std::vector<int>& proto_ids) override {
        std::vector<EdgeClass> out;
        std::vector<int> digits;
        for (int id : proto_ids) {
            out.push_back(classes_[static_cast<size_t>(id)]);
            digits.push_back(static_cast<int>(out.back()));
        }
        tb_.append(AdviceTape::encode_choices(digits, 3));
        return out;
    }

    std::vector<int> six_block(const VertexId& at, const std::vector<int>& instance_ids) override {
        std::vector<int> symbols;
        for (int id : instance_ids) {
            const Edge& fwd = ga_.edge(2 * id - 1);
            int out_copy = fwd.src == at ? 2 * id - 1 : 2 * id;
            int in_copy = fwd.src == at ? 2 * id : 2 * id - 1;
            symbols.push_back(six_symbol(prof_[static_cast<size_t>(out_copy)],
                                         prof_[static_cast<size_t>(in_copy)]));
        }
        tb_.append(AdviceTape::encode_choices(symbols, 6));
        return symbols;
    }

    InStreamSummary in_stream(const VertexId& v) override {
        std::vector<int> ids;
        for (int id : ga_.in_ids.at(v)) {
            if (id == closing_id_) continue;
            if (visited_.count(ga_.edge(id).src)) continue;
            ids.push_back(id);
        }
        std::sort(ids.begin(), ids.end());
        int k = static_cast<int>(ids.size());
        stream_pos_[v] = tb_.reserve(2 * static_cast<size_t>(k) + 2);
        stream_k_[v] = k;
        stream_next_[v] = 0;
        tb_.fill(stream_pos_[v] + 2 * static_cast<size_t>(k), {1, 1});  // delimiter
        InStreamSummary s;
        for (int id : ids) {
            EdgeClass c = classes_[static_cast<size_t>(id)];
            if (c == EdgeClass::Zero) s.zero++;
            else if (c == EdgeClass::One) s.one++;
            else {
                s.multi++;
                unbound_multi_in_[v].insert(id);
            }
        }
        return s;
    }

    EdgeClass bind_in(const VertexId& v, int proto_id) override {
        int slot = stream_next_.at(v)++;
        if (slot >= stream_k_.at(v)) throw std::logic_error("incoming stream overflow at " + v);
        EdgeClass c = classes_[static_cast<size_t>(proto_id)];
        int sym = static_cast<int>(c);
        tb_.fill(stream_pos_.at(v) + 2 * static_cast<size_t>(slot),
                 {static_cast<uint8_t>((sym >> 1) & 1), static_cast<uint8_t>(sym & 1)});
        unbound_multi_in_[v].erase(proto_id);
        return c;
    }

    std::pair<bool, long long> light_query(const VertexId& cluster_v, const PairSide& a,
                                           const PairSide& b) override {
        long long ca = side_count(cluster_v, a);
        long long cb = side_count(cluster_v, b);
        bool first_light = ca < cb;  // tie: the canonical-first edge stays heavy
        long long cnt = first_light ? ca : cb;
        if (cnt < 2) throw std::logic_error("light side of an unresolved pair must be multi-use");
        tb_.append_bit(first_light ? 1 : 0);
        tb_.append(AdviceTape::encode_count(cnt));
        return {first_light, cnt};
    }

    bool last_query(const PairSide& a, const PairSide& b) override {
        bool first = latest(a) > latest(b);
        tb_.append_bit(first ? 1 : 0);
        return first;
    }

    void note_visit(const VertexId& v) override { visited_.insert(v); }

    void note_move(int proto_id) override {
        used_[static_cast<size_t>(proto_id)]++;
        if (used_[static_cast<size_t>(proto_id)] > prof_[static_cast<size_t>(proto_id)])
            throw std::logic_error("explorer overshot the optimal count on edge " +
                                   std::to_string(proto_id));
    }

    long long bits() const override { return static_cast<long long>(tb_.size()); }

    AdviceTape finish() const {
        for (size_t id = 1; id < prof_.size(); id++) {
            if (static_cast<int>(id) == closing_id_) continue;
            if (used_[id] != prof_[id])
                throw std::logic_error("explorer finished without matching the optimal profile");
        }
        return tb_.finalize();
    }

  private:
    long long side_count(const VertexId& cluster_v, const PairSide& s) const {
        long long c = s.forced + s.pending_one;
        for (int id : s.proto_ids) c += prof_[static_cast<size_t>(id)];
        if (s.pending_multi_all) {
            auto it = unbound_multi_in_.find(cluster_v);
            if (it != unbound_multi_in_.end())
                for (int id : it->second) c += prof_[static_cast<size_t>(id)];
        }
        return c;
    }

    int latest(const PairSide& s) const {
        if (s.proto_ids.empty() || s.pending_one > 0 || s.pending_multi_all)
            throw std::logic_error("last-exit query over unidentified edges");
        int best = -1;
        for (int id : s.proto_ids) best = std::max(best, last_pos_[static_cast<size_t>(id)]);
        if (best < 0) throw std::logic_error("last-exit query over unused edges");
        return best;
    }

    const Digraph& ga_;
    TraversalProfile prof_;
    Classification classes_;
    std::vector<int> last_pos_;
    int closing_id_;
    bool path_;
    VertexId v_end_;
    int rank_width_;
    size_t rank_pos_ = 0;
    TapeBuilder tb_;
    std::set<VertexId> visited_;
    std::map<VertexId, size_t> stream_pos_;
    std::map<VertexId, int> stream_k_, stream_next_;
    std::map<VertexId, std::set<int>> unbound_multi_in_;
    TraversalProfile used_;
};

class ReplayChannel : public Channel {
  public:
    ReplayChannel(AdviceTape tape, bool path, int n)
        : tape_(std::move(tape)), path_(path), n_(n) {}

    void begin() override {
        if (!path_) return;
        int w = rank_field_width(n_);
        rank_ = w > 0 ? static_cast<int>(tape_.read_fixed(w)) + 2 : 2;
        if (rank_ < 2 || rank_ > n_) throw std::runtime_error("end rank out of range");
    }

    bool end_trigger(const VertexId&, int rank) override { return rank == rank_; }

    std::vector<EdgeClass> out_block(const std::vector<int>& proto_ids) override {
        auto digits = tape_.unpack_choices(static_cast<int>(proto_ids.size()), 3);
        std::vector<EdgeClass> out;
        for (int d : digits) out.push_back(static_cast<EdgeClass>(d));
        return out;
    }

    std::vector<int> six_block(const VertexId&, const std::vector<int>& instance_ids) override {
        return tape_.unpack_choices(static_cast<int>(instance_ids.size()), 6);
    }

    InStreamSummary in_stream(const VertexId& v) override {
        InStreamSummary s;
        auto& syms = stream_[v];
        while (true) {
            int sym = static_cast<int>(tape_.read_fixed(2));
            if (sym == 3) break;
            syms.push_back(static_cast<EdgeClass>(sym));
            if (sym == 0) s.zero++;
            else if (sym == 1) s.one++;
            else s.multi++;
        }
        next_[v] = 0;
        return s;
    }

    EdgeClass bind_in(const VertexId& v, int) override {
        auto it = stream_.find(v);
        if (it == stream_.end() || next_[v] >= static_cast<int>(it->second.size()))
            throw std::runtime_error("advice inconsistent: incoming stream exhausted at " + v);
        return it->second[static_cast<size_t>(next_[v]++)];
    }

    std::pair<bool, long long> light_query(const VertexId&, const PairSide&,
                                           const PairSide&) override {
        bool first = tape_.read_bit() != 0;
        return {first, tape_.read_count()};
    }

    bool last_query(const PairSide&, const PairSide&) override { return tape_.read_bit() != 0; }

    long long bits() const override { return static_cast<long long>(tape_.consumed()); }

  private:
    AdviceTape tape_;
    bool path_;
    int n_;
    int rank_ = -1;
    std::map<VertexId, std::vector<EdgeClass>> stream_;
    std::map<VertexId, int> next_;
};

// ---------------------------------------------------------------------------
// The bounded-degree overlay the explorer maintains: every visited vertex with
// more than two used outgoing or incoming edges carries compact binary trees
// whose virtual edges are multi-use by construction. All movement decisions,
// balance propagation and comparison advice live on this overlay.
// ---------------------------------------------------------------------------

enum class HVKind : int { Root = 0, OutV = 1, InV = 2 };
using HV = std::tuple<int, int, int>;  // cluster, kind, tree position

struct HEdgeS {
    bool virt = false;
    bool closing = false;
    int proto_id = 0;
    EdgeClass cls = EdgeClass::Multi;
    bool known = false;
    long long count = 0;
    long long used = 0;
    bool last_marked = false;
    bool has_a = false, has_b = false;
    HV end_a{}, end_b{};          // tail-side and head-side overlay vertices
    int target_cluster = -1, target_entry = -1;
};

struct EntryS {
    int hedge = -1;
    EdgeClass cls = EdgeClass::One;
    bool closing = false;
    bool forced_known = false;
    long long forced = 0;
};

struct ClusterS {
    VertexId v;
    int k_out = 0, k_in = 0;
    std::optional<TreeLayout> out_lay, in_lay;
    std::vector<int> out_child_edge;       // slot rank (or direct position) -> H edge
    std::map<int, int> out_virt_edge;      // out-tree position -> H edge (parent -> pos)
    std::map<int, int> in_virt_edge;       // in-tree position -> H edge (pos -> parent)
    std::vector<int> out_pos_of_rank, in_pos_of_rank;
    std::vector<EntryS> entries;           // canonical in order; index == in slot rank
    int multi_base = 0, one_base = 0;
    int bound_multi = 0, bound_one = 0;
    int pending_multi_left = 0;
    int closing_slot_rank = -1;            // out side slot holding the closing edge
};

// A child edge of an overlay vertex: either a materialized H edge or a not yet
// identified incoming entry.
struct ChildRef {
    int hedge = -1;
    int cluster = -1, entry = -1;
    bool is_entry() const { return entry >= 0; }
};

class ProtocolExplorer {
  public:
    ProtocolExplorer(Env& env, Channel& ch, const VariantConfig& vc)
        : env_(env), ch_(ch), vc_(vc), n_(env.n()) {}

    ExploreResult run() {
        ch_.begin();
        cur_ = env_.start();
        first_visit(cur_);
        if (n_ > 1) {
            long long moves = 0;
            long long cap = static_cast<long long>(n_ + 2) * (env_.graph().m() + 2) * 4 + 16;
            while (true) {
                if (!vc_.path && cur_ == env_.start() && root_exhausted(cluster_of_.at(cur_))) break;
                if (advance_once()) break;
                if (++moves > cap) throw std::runtime_error("advice inconsistent: walk does not terminate");
            }
        }
        if (env_.visited_count() != n_)
            throw std::runtime_error("exploration ended before every vertex was visited");
        ExploreResult res;
        res.walk.start = env_.start();
        res.walk.edges = env_.trail();
        res.bits_read = ch_.bits();
        return res;
    }

  private:
    // ----- identifiers and lookup -----

    bool undirected() const { return !vc_.directed; }

    int proto_of_instance_out(const Edge& e, const VertexId& at) const {
        if (!undirected()) return e.id;
        return e.src == at ? 2 * e.id - 1 : 2 * e.id;
    }

    int instance_of_proto(int proto_id) const {
        return undirected() ? (proto_id + 1) / 2 : proto_id;
    }

    bool has_cluster(const VertexId& v) const { return cluster_of_.count(v) > 0; }

    HEdgeS& he(int idx) { return hedges_[static_cast<size_t>(idx)]; }

    int new_hedge(const HEdgeS& e) {
        hedges_.push_back(e);
        int idx = static_cast<int>(hedges_.size()) - 1;
        if (!e.virt && !e.closing) by_proto_[e.proto_id] = idx;
        return idx;
    }

    int adopt_or_create(int proto_id, EdgeClass cls) {
        auto it = by_proto_.find(proto_id);
        if (it != by_proto_.end()) return it->second;
        HEdgeS e;
        e.proto_id = proto_id;
        e.cls = cls;
        if (cls == EdgeClass::One) {
            e.known = true;
            e.count = 1;
        }
        return new_hedge(e);
    }

    // ----- first visit: classification, cluster construction, queries -----

    void first_visit(const VertexId& v) {
        visit_rank_[v] = ++distinct_;
        ch_.note_visit(v);
        if (vc_.path && !end_known_ && ch_.end_trigger(v, distinct_)) {
            end_known_ = true;
            v_end_ = v;
        }
        auto obs = env_.observe(v);

        std::vector<std::tuple<int, VertexId, EdgeClass>> outs;  // proto, other, class
        std::vector<std::tuple<int, VertexId, EdgeClass>> bound_now;  // binds made at this visit
        InStreamSummary stream;

        if (!undirected()) {
            for (const Edge& e : obs) {
                if (!env_.visited(e.dst)) continue;
                EdgeClass c = ch_.bind_in(e.dst, e.id);
                proto_class_[e.id] = c;
                bound_now.emplace_back(e.id, e.dst, c);
                if (c != EdgeClass::Zero) outs.emplace_back(e.id, e.dst, c);
            }
            std::vector<int> block_ids;
            for (const Edge& e : obs)
                if (!env_.visited(e.dst)) block_ids.push_back(e.id);
            auto classes = ch_.out_block(block_ids);
            for (size_t i = 0; i < block_ids.size(); i++) {
                const Edge& e = env_.graph().edge(block_ids[i]);
                proto_class_[e.id] = classes[i];
                if (classes[i] != EdgeClass::Zero) {
                    outs.emplace_back(e.id, e.dst, classes[i]);
                    incoming_known_[e.dst].push_back(e.id);
                }
            }
            stream = ch_.in_stream(v);
        } else {
            std::vector<int> unclass;
            for (const Edge& e : obs)
                if (!classified_und_.count(e.id)) unclass.push_back(e.id);
            auto syms = ch_.six_block(v, unclass);
            for (size_t i = 0; i < unclass.size(); i++) {
                const Edge& e = env_.graph().edge(unclass[i]);
                auto [out_cls, in_cls] = six_classes(syms[i]);
                int out_copy = e.src == v ? 2 * e.id - 1 : 2 * e.id;
                int in_copy = e.src == v ? 2 * e.id : 2 * e.id - 1;
                proto_class_[out_copy] = out_cls;
                proto_class_[in_copy] = in_cls;
                classified_und_.insert(e.id);
            }
            for (const Edge& e : obs) {
                int out_copy = e.src == v ? 2 * e.id - 1 : 2 * e.id;
                auto it = proto_class_.find(out_copy);
                if (it != proto_class_.end() && it->second != EdgeClass::Zero)
                    outs.emplace_back(out_copy, e.src == v ? e.dst : e.src, it->second);
            }
        }

        build_cluster(v, obs, outs, stream);
        for (auto& [proto, tgt, c] : bound_now) link_bound_in(proto, tgt, c);
        query_sweep(cluster_of_.at(v));
        enqueue_cluster(cluster_of_.at(v));
        resolve_all();
    }

    void build_cluster(const VertexId& v, const std::vector<Edge>& obs,
                       std::vector<std::tuple<int, VertexId, EdgeClass>> outs,
                       const InStreamSummary& stream) {
        bool is_end = vc_.path && end_known_ && v_end_ == v && closing_edge_ < 0;
        bool is_start_path = vc_.path && v == env_.start();

        // Canonical out order: (other endpoint, edge id); the virtual closing
        // edge sorts after every real edge toward the start vertex.
        std::sort(outs.begin(), outs.end(), [](const auto& a, const auto& b) {
            return std::tie(std::get<1>(a), std::get<0>(a)) < std::tie(std::get<1>(b), std::get<0>(b));
        });

        int cidx = static_cast<int>(clusters_.size());
        clusters_.emplace_back();
        cluster_of_[v] = cidx;
        ClusterS& C = clusters_.back();
        C.v = v;

        // ----- out side -----
        std::vector<int> out_edges;  // canonical order, H edge indices
        for (auto& [proto, other, c] : outs) {
            int idx = adopt_or_create(proto, c);
            out_edges.push_back(idx);
        }
        if (is_end) {
            HEdgeS ce;
            ce.closing = true;
            ce.cls = EdgeClass::One;
            ce.known = true;
            ce.count = 1;
            ce.last_marked = true;
            closing_edge_ = new_hedge(ce);
            // closing target: insertion point among edges toward the start
            VertexId v0 = env_.start();
            size_t at = out_edges.size();
            for (size_t i = 0; i < outs.size(); i++)
                if (std::get<1>(outs[i]) > v0) { at = i; break; }
            out_edges.insert(out_edges.begin() + static_cast<long>(at), closing_edge_);
        }
        C.k_out = static_cast<int>(out_edges.size());
        if (C.k_out == 0) throw std::runtime_error("advice inconsistent: no used outgoing edge at " + v);
        if (C.k_out >= 3) {
            C.out_lay = make_layout(C.k_out);
            C.out_pos_of_rank.assign(static_cast<size_t>(C.k_out), 0);
            for (int pos : C.out_lay->slot_order)
                C.out_pos_of_rank[static_cast<size_t>(C.out_lay->slot_rank(pos))] = pos;
            for (int p = 1; p <= C.k_out - 2; p++) {
                HEdgeS ve;
                ve.virt = true;
                ve.has_a = true;
                ve.end_a = hv(cidx, TreeLayout::parent(p) == 0 ? HVKind::Root : HVKind::OutV,
                              TreeLayout::parent(p));
                ve.has_b = true;
                ve.end_b = hv(cidx, HVKind::OutV, p);
                C.out_virt_edge[p] = new_hedge(ve);
            }
        }
        C.out_child_edge = out_edges;
        for (int r = 0; r < C.k_out; r++) {
            HEdgeS& e = he(out_edges[static_cast<size_t>(r)]);
            int att_pos = C.k_out >= 3 ? TreeLayout::parent(C.out_pos_of_rank[static_cast<size_t>(r)]) : 0;
            e.has_a = true;
            e.end_a = hv(cidx, att_pos == 0 ? HVKind::Root : HVKind::OutV, att_pos);
            if (e.closing) C.closing_slot_rank = r;
        }

        // ----- in side -----
        std::vector<std::tuple<long long, int>> bound;  // sort key component, proto id
        if (!undirected()) {
            for (int proto : incoming_known_[v]) {
                EdgeClass c = proto_class_.at(proto);
                if (c == EdgeClass::Zero) continue;
                const Edge& e = env_.graph().edge(proto);
                bound.emplace_back(visit_rank_.at(e.src), proto);
            }
            std::sort(bound.begin(), bound.end());
        } else {
            std::vector<std::tuple<VertexId, int>> tmp;
            for (const Edge& e : obs) {
                int in_copy = e.src == v ? 2 * e.id : 2 * e.id - 1;
                auto it = proto_class_.find(in_copy);
                if (it == proto_class_.end() || it->second == EdgeClass::Zero) continue;
                tmp.emplace_back(e.src == v ? e.dst : e.src, in_copy);
            }
            std::sort(tmp.begin(), tmp.end());
            for (auto& [other, proto] : tmp) bound.emplace_back(0, proto);
        }

        if (is_start_path) {
            EntryS e;
            e.closing = true;
            e.cls = EdgeClass::One;
            C.entries.push_back(e);
            v0_cluster_ = cidx;
        }
        for (auto& [key, proto] : bound) {
            EntryS e;
            e.cls = proto_class_.at(proto);
            e.hedge = adopt_or_create(proto, e.cls);
            C.entries.push_back(e);
        }
        C.multi_base = static_cast<int>(C.entries.size());
        for (int i = 0; i < stream.multi; i++) {
            EntryS e;
            e.cls = EdgeClass::Multi;
            C.entries.push_back(e);
        }
        C.one_base = static_cast<int>(C.entries.size());
        for (int i = 0; i < stream.one; i++) {
            EntryS e;
            e.cls = EdgeClass::One;
            C.entries.push_back(e);
        }
        C.pending_multi_left = stream.multi;
        C.k_in = static_cast<int>(C.entries.size());
        if (C.k_in == 0) throw std::runtime_error("advice inconsistent: no used incoming edge at " + v);
        if (C.k_in >= 3) {
            C.in_lay = make_layout(C.k_in);
            C.in_pos_of_rank.assign(static_cast<size_t>(C.k_in), 0);
            for (int pos : C.in_lay->slot_order)
                C.in_pos_of_rank[static_cast<size_t>(C.in_lay->slot_rank(pos))] = pos;
            for (int p = 1; p <= C.k_in - 2; p++) {
                HEdgeS ve;
                ve.virt = true;
                ve.has_a = true;
                ve.end_a = hv(cidx, HVKind::InV, p);
                ve.has_b = true;
                ve.end_b = hv(cidx, TreeLayout::parent(p) == 0 ? HVKind::Root : HVKind::InV,
                              TreeLayout::parent(p));
                C.in_virt_edge[p] = new_hedge(ve);
            }
        }
        for (int i = 0; i < C.k_in; i++)
            if (C.entries[static_cast<size_t>(i)].hedge >= 0) attach_entry(cidx, i);
        if (is_end && v0_cluster_ >= 0) {
            // start cluster predates the end vertex: hook the closing edge in
            ClusterS& C0 = clusters_[static_cast<size_t>(v0_cluster_)];
            for (int i = 0; i < C0.k_in; i++)
                if (C0.entries[static_cast<size_t>(i)].closing) {
                    C0.entries[static_cast<size_t>(i)].hedge = closing_edge_;
                    attach_entry(v0_cluster_, i);
                }
        }
    }

    void attach_entry(int cidx, int entry_idx) {
        ClusterS& C = clusters_[static_cast<size_t>(cidx)];
        HEdgeS& e = he(C.entries[static_cast<size_t>(entry_idx)].hedge);
        int att_pos = C.k_in >= 3 ? TreeLayout::parent(C.in_pos_of_rank[static_cast<size_t>(entry_idx)]) : 0;
        e.has_b = true;
        e.end_b = hv(cidx, att_pos == 0 ? HVKind::Root : HVKind::InV, att_pos);
        e.target_cluster = cidx;
        e.target_entry = entry_idx;
        const EntryS& en = C.entries[static_cast<size_t>(entry_idx)];
        if (en.forced_known) set_count(en.hedge, en.forced);
    }

    void link_bound_in(int proto_id, const VertexId& target, EdgeClass cls) {
        if (cls == EdgeClass::Zero) return;
        int cidx = cluster_of_.at(target);
        ClusterS& C = clusters_[static_cast<size_t>(cidx)];
        int entry_idx;
        if (cls == EdgeClass::Multi) {
            entry_idx = C.multi_base + C.bound_multi++;
            if (entry_idx >= C.one_base)
                throw std::runtime_error("advice inconsistent: multi in-entry overflow at " + target);
            C.pending_multi_left--;
        } else {
            entry_idx = C.one_base + C.bound_one++;
            if (entry_idx >= C.k_in)
                throw std::runtime_error("advice inconsistent: single in-entry overflow at " + target);
        }
        C.entries[static_cast<size_t>(entry_idx)].hedge = by_proto_.at(proto_id);
        attach_entry(cidx, entry_idx);
        enqueue_cluster(cidx);
    }

    // ----- overlay vertices and their incident edges -----

    static HV hv(int c, HVKind k, int pos) { return {c, static_cast<int>(k), pos}; }

    std::vector<ChildRef> out_children(const HV& u) {
        auto [cidx, kind, pos] = u;
        ClusterS& C = clusters_[static_cast<size_t>(cidx)];
        std::vector<ChildRef> res;
        auto add_edge = [&](int idx) { res.push_back(ChildRef{idx, -1, -1}); };
        if (kind == static_cast<int>(HVKind::InV)) {
            add_edge(C.in_virt_edge.at(pos));
            return res;
        }
        if (kind == static_cast<int>(HVKind::Root) && C.k_out <= 2) {
            for (int e : C.out_child_edge) add_edge(e);
            return res;
        }
        for (int c : {2 * pos + 1, 2 * pos + 2}) {
            if (c <= C.k_out - 2)
                add_edge(C.out_virt_edge.at(c));
            else
                add_edge(C.out_child_edge[static_cast<size_t>(C.out_lay->slot_rank(c))]);
        }
        return res;
    }

    std::vector<ChildRef> in_children(const HV& u) {
        auto [cidx, kind, pos] = u;
        ClusterS& C = clusters_[static_cast<size_t>(cidx)];
        std::vector<ChildRef> res;
        auto add = [&](int c) {  // in-tree child position
            if (c <= C.k_in - 2) {
                res.push_back(ChildRef{C.in_virt_edge.at(c), -1, -1});
            } else {
                int rank = C.in_lay->slot_rank(c);
                const EntryS& en = C.entries[static_cast<size_t>(rank)];
                if (en.hedge >= 0)
                    res.push_back(ChildRef{en.hedge, -1, -1});
                else
                    res.push_back(ChildRef{-1, cidx, rank});
            }
        };
        if (kind == static_cast<int>(HVKind::OutV)) {
            res.push_back(ChildRef{C.out_virt_edge.at(pos), -1, -1});
            return res;
        }
        if (kind == static_cast<int>(HVKind::Root) && C.k_in <= 2) {
            for (int i = 0; i < C.k_in; i++) {
                const EntryS& en = C.entries[static_cast<size_t>(i)];
                if (en.hedge >= 0)
                    res.push_back(ChildRef{en.hedge, -1, -1});
                else
                    res.push_back(ChildRef{-1, cidx, i});
            }
            return res;
        }
        if (kind == static_cast<int>(HVKind::Root)) {
            for (int c : {1, 2}) add(c);
            return res;
        }
        for (int c : {2 * pos + 1, 2 * pos + 2}) add(c);
        return res;
    }

    bool ref_known(const ChildRef& r, long long& val) {
        if (r.is_entry()) {
            const EntryS& en = clusters_[static_cast<size_t>(r.cluster)].entries[static_cast<size_t>(r.entry)];
            if (en.closing || en.cls == EdgeClass::One) { val = 1; return true; }
            if (en.forced_known) { val = en.forced; return true; }
            return false;
        }
        const HEdgeS& e = he(r.hedge);
        if (e.known) { val = e.count; return true; }
        return false;
    }

    void apply_count(const ChildRef& r, long long val) {
        if (r.is_entry()) {
            EntryS& en = clusters_[static_cast<size_t>(r.cluster)].entries[static_cast<size_t>(r.entry)];
            if (val < 2) throw std::runtime_error("advice inconsistent: multi count below 2");
            en.forced_known = true;
            en.forced = val;
            return;
        }
        set_count(r.hedge, val);
    }

    void set_count(int idx, long long val) {
        HEdgeS& e = he(idx);
        long long least = e.virt || e.cls == EdgeClass::Multi ? 2 : 1;
        if (val < least) throw std::runtime_error("advice inconsistent: count below minimum");
        if (e.known) {
            if (e.count != val) throw std::runtime_error("advice inconsistent: conflicting counts");
            return;
        }
        if (e.used > val) throw std::runtime_error("advice inconsistent: count below so-far usage");
        e.known = true;
        e.count = val;
        if (e.has_a) worklist_.insert(e.end_a);
        if (e.has_b) worklist_.insert(e.end_b);
    }

    void enqueue_cluster(int cidx) {
        ClusterS& C = clusters_[static_cast<size_t>(cidx)];
        worklist_.insert(hv(cidx, HVKind::Root, 0));
        for (const auto& kv : C.out_virt_edge) worklist_.insert(hv(cidx, HVKind::OutV, kv.first));
        for (const auto& kv : C.in_virt_edge) worklist_.insert(hv(cidx, HVKind::InV, kv.first));
    }

    // ----- comparison advice -----

    std::pair<PairSide, bool> side_for(const ChildRef& r) {
        PairSide s;
        bool valid = true;
        if (r.is_entry()) {
            const ClusterS& C = clusters_[static_cast<size_t>(r.cluster)];
            const EntryS& en = C.entries[static_cast<size_t>(r.entry)];
            if (en.closing) s.forced = 1;
            else if (en.forced_known) s.forced = en.forced;
            else if (en.cls == EdgeClass::One) s.pending_one = 1;
            else {
                s.pending_multi_all = C.pending_multi_left == 1;
                valid = C.pending_multi_left == 1;
            }
            return {s, valid};
        }
        const HEdgeS& e = he(r.hedge);
        if (!e.virt) {
            if (e.closing) s.forced = 1;
            else s.proto_ids.push_back(e.proto_id);
            return {s, true};
        }
        if (std::get<1>(e.end_a) == static_cast<int>(HVKind::InV)) {
            // in-tree edge child -> parent: its count is its child subtree
            int cidx = std::get<0>(e.end_a);
            const ClusterS& C = clusters_[static_cast<size_t>(cidx)];
            auto [lo, hi] = C.in_lay->range[static_cast<size_t>(std::get<2>(e.end_a))];
            int pend_multi = 0;
            for (int rank = lo; rank <= hi; rank++) {
                const EntryS& en = C.entries[static_cast<size_t>(rank)];
                if (en.closing) s.forced += 1;
                else if (en.hedge >= 0) s.proto_ids.push_back(he(en.hedge).proto_id);
                else if (en.forced_known) s.forced += en.forced;
                else if (en.cls == EdgeClass::One) s.pending_one++;
                else pend_multi++;
            }
            if (pend_multi > 0) {
                s.pending_multi_all = pend_multi == C.pending_multi_left;
                valid = s.pending_multi_all;
            }
            return {s, valid};
        }
        // out-tree edge parent -> child: its count is its child subtree
        int cidx = std::get<0>(e.end_b);
        const ClusterS& C = clusters_[static_cast<size_t>(cidx)];
        auto [lo, hi] = C.out_lay->range[static_cast<size_t>(std::get<2>(e.end_b))];
        for (int rank = lo; rank <= hi; rank++) {
            const HEdgeS& se = he(C.out_child_edge[static_cast<size_t>(rank)]);
            if (se.closing) s.forced += 1;
            else s.proto_ids.push_back(se.proto_id);
        }
        return {s, true};
    }

    void query_sweep(int cidx) {
        ClusterS& C = clusters_[static_cast<size_t>(cidx)];
        std::vector<HV> order;
        order.push_back(hv(cidx, HVKind::Root, 0));
        for (const auto& kv : C.out_virt_edge) order.push_back(hv(cidx, HVKind::OutV, kv.first));
        for (const HV& u : order) {
            auto outs = out_children(u);
            if (outs.size() != 2) continue;
            // a-priori marking when one child leads to the virtual closing edge
            bool apriori = false;
            if (C.closing_slot_rank >= 0) {
                for (int i = 0; i < 2 && !apriori; i++) {
                    const ChildRef& r = outs[static_cast<size_t>(i)];
                    const HEdgeS& e = he(r.hedge);
                    bool covers;
                    if (e.closing) covers = true;
                    else if (e.virt) {
                        auto [lo, hi] = C.out_lay->range[static_cast<size_t>(std::get<2>(e.end_b))];
                        covers = C.closing_slot_rank >= lo && C.closing_slot_rank <= hi;
                    } else
                        covers = false;
                    if (covers) {
                        he(r.hedge).last_marked = true;
                        apriori = true;
                    }
                }
            }
            long long v0c, v1c;
            bool k0 = ref_known(outs[0], v0c), k1 = ref_known(outs[1], v1c);
            if (!k0 && !k1) {
                auto [sa, va] = side_for(outs[0]);
                auto [sb, vb] = side_for(outs[1]);
                if (!va || !vb) throw std::logic_error("outgoing pair unevaluable at first visit");
                auto [first, cnt] = ch_.light_query(C.v, sa, sb);
                apply_count(first ? outs[0] : outs[1], cnt);
            }
            if (!apriori) {
                auto [sa, va] = side_for(outs[0]);
                auto [sb, vb] = side_for(outs[1]);
                bool first = ch_.last_query(sa, sb);
                he(outs[first ? 0 : 1].hedge).last_marked = true;
            }
        }
    }

    // ----- balance propagation -----

    void resolve_all() {
        while (!worklist_.empty()) {
            HV u = *worklist_.begin();
            worklist_.erase(worklist_.begin());
            process(u);
        }
    }

    void process(const HV& u) {
        auto ins = in_children(u);
        auto outs = out_children(u);
        long long in_known = 0, out_known = 0;
        std::vector<ChildRef> unknown_ins, unknown_outs;
        for (const auto& r : ins) {
            long long v;
            if (ref_known(r, v)) in_known += v;
            else unknown_ins.push_back(r);
        }
        for (const auto& r : outs) {
            long long v;
            if (ref_known(r, v)) out_known += v;
            else unknown_outs.push_back(r);
        }
        size_t unknowns = unknown_ins.size() + unknown_outs.size();
        if (unknowns == 0) {
            if (in_known != out_known)
                throw std::runtime_error("advice inconsistent: balance violation");
            return;
        }
        if (unknowns == 1) {
            bool out_side = !unknown_outs.empty();
            long long val = out_side ? in_known - out_known : out_known - in_known;
            if (val <= 0) throw std::runtime_error("advice inconsistent: balance forces nonpositive count");
            apply_count(out_side ? unknown_outs[0] : unknown_ins[0], val);
            worklist_.insert(u);
            return;
        }
        if (unknowns == 2 && unknown_ins.size() == 2 && ins.size() == 2 && !q3_done_.count(u)) {
            auto [sa, va] = side_for(ins[0]);
            auto [sb, vb] = side_for(ins[1]);
            if (!va || !vb) return;  // revisited after more bindings
            auto [cidx, kind, pos] = u;
            auto [first, cnt] = ch_.light_query(clusters_[static_cast<size_t>(cidx)].v, sa, sb);
            (void)kind;
            (void)pos;
            q3_done_.insert(u);
            apply_count(first ? ins[0] : ins[1], cnt);
            worklist_.insert(u);
        }
    }

    // ----- movement -----

    bool edge_exhausted(const HEdgeS& e) const { return e.known && e.used >= e.count; }

    bool root_exhausted(int cidx) {
        for (const auto& r : out_children(hv(cidx, HVKind::Root, 0)))
            if (!edge_exhausted(he(r.hedge))) return false;
        return true;
    }

    int choose(const std::vector<ChildRef>& outs) {
        std::vector<int> usable;
        for (const auto& r : outs)
            if (!edge_exhausted(he(r.hedge))) usable.push_back(r.hedge);
        if (usable.empty())
            throw std::runtime_error("advice inconsistent: all outgoing edges exhausted");
        // (a) an edge that can still be used at least twice, the unknown heavy
        // one first
        for (int idx : usable)
            if (!he(idx).known) return idx;
        for (int idx : usable)
            if (he(idx).count - he(idx).used > 1) return idx;
        // (b) a single-use edge not marked last
        for (int idx : usable)
            if (!he(idx).last_marked) return idx;
        // (c) the last or sole remaining edge
        return usable.front();
    }

    void bump(int idx) {
        HEdgeS& e = he(idx);
        e.used++;
        if (e.known && e.used > e.count)
            throw std::runtime_error("advice inconsistent: traversal beyond the edge count");
    }

    // One real traversal (or the final virtual closing step). Returns true
    // when the run is complete.
    bool advance_once() {
        int cidx = cluster_of_.at(cur_);
        HV u = hv(cidx, HVKind::Root, 0);
        while (true) {
            int pick = choose(out_children(u));
            HEdgeS& e = he(pick);
            bump(pick);
            if (e.closing) {
                if (cur_ != v_end_) throw std::logic_error("closing edge taken away from the end vertex");
                return true;
            }
            if (e.virt) {
                u = e.end_b;
                continue;
            }
            int instance_id = instance_of_proto(e.proto_id);
            VertexId to = env_.move(cur_, instance_id);
            ch_.note_move(e.proto_id);
            cur_ = to;
            if (!has_cluster(to)) first_visit(to);
            ascend(pick);
            return false;
        }
    }

    void ascend(int arrival_edge) {
        HEdgeS& e = he(arrival_edge);
        if (e.target_cluster < 0) throw std::logic_error("arrival edge has no bound entry");
        ClusterS& C = clusters_[static_cast<size_t>(e.target_cluster)];
        if (C.k_in <= 2) return;
        int pos = C.in_pos_of_rank[static_cast<size_t>(e.target_entry)];
        int q = TreeLayout::parent(pos);
        while (q != 0) {
            bump(C.in_virt_edge.at(q));
            q = TreeLayout::parent(q);
        }
    }

    Env& env_;
    Channel& ch_;
    VariantConfig vc_;
    int n_;
    std::map<VertexId, int> cluster_of_;
    std::vector<ClusterS> clusters_;
    std::vector<HEdgeS> hedges_;
    std::map<int, int> by_proto_;
    std::map<int, EdgeClass> proto_class_;
    std::set<int> classified_und_;
    std::map<VertexId, std::vector<int>> incoming_known_;
    std::map<VertexId, int> visit_rank_;
    int distinct_ = 0;
    bool end_known_ = false;
    VertexId v_end_;
    int closing_edge_ = -1;
    int v0_cluster_ = -1;
    std::set<HV> worklist_, q3_done_;
    VertexId cur_;
};

// ---------------------------------------------------------------------------
// Known-graph variants: one classification block, count reconstruction by
// leaf peeling, and a deterministic Eulerian walk.
// ---------------------------------------------------------------------------

std::vector<int> hierholzer(const Digraph& g, const TraversalProfile& profile) {
    TraversalProfile residual = profile;
    std::map<VertexId, std::vector<int>> adj;
    for (const auto& v : g.vertices) {
        auto ids = g.out_ids.at(v);
        std::sort(ids.begin(), ids.end(), [&](int a, int b) {
            return std::tie(g.edge(a).dst, a) < std::tie(g.edge(b).dst, b);
        });
        adj[v] = ids;
    }
    std::vector<int> circuit;
    std::vector<std::pair<VertexId, int>> st;  // vertex, edge taken to reach it
    st.emplace_back(g.start, 0);
    while (!st.empty()) {
        const VertexId v = st.back().first;
        int next = 0;
        for (int id : adj[v])
            if (residual[static_cast<size_t>(id)] > 0) { next = id; break; }
        if (next != 0) {
            residual[static_cast<size_t>(next)]--;
            st.emplace_back(g.edge(next).dst, next);
        } else {
            if (st.back().second != 0) circuit.push_back(st.back().second);
            st.pop_back();
        }
    }
    std::reverse(circuit.begin(), circuit.end());
    for (size_t id = 1; id < residual.size(); id++)
        if (residual[id] != 0)
            throw std::runtime_error("advice inconsistent: counts admit no Eulerian walk");
    return circuit;
}

ExploreResult known_replay(const Digraph& instance, const Digraph& proto, const VariantConfig& vc,
                           AdviceTape tape) {
    ExploreResult res;
    res.walk.start = instance.start;
    if (vc.unit) {
        Walk w = optimal_walk_plain(proto, vc.path ? Closure::Path : Closure::Cyclic);
        for (int id : w.edges)
            res.walk.edges.push_back(vc.directed ? id : (id + 1) / 2);
        res.bits_read = 0;
        return res;
    }
    VertexId v_end;
    if (vc.path) {
        std::vector<VertexId> order = proto.vertices;
        std::sort(order.begin(), order.end());
        int idx = static_cast<int>(tape.read_fixed(index_field_width(proto.n())));
        if (idx >= proto.n()) throw std::runtime_error("end vertex index out of range");
        v_end = order[static_cast<size_t>(idx)];
    }

    Classification classes(static_cast<size_t>(proto.m()) + 1, EdgeClass::Zero);
    if (vc.directed) {
        auto digits = tape.unpack_choices(proto.m(), 3);
        for (int i = 0; i < proto.m(); i++) classes[static_cast<size_t>(i) + 1] = static_cast<EdgeClass>(digits[static_cast<size_t>(i)]);
    } else {
        auto digits = tape.unpack_choices(instance.m(), 6);
        for (int i = 1; i <= instance.m(); i++) {
            auto [fwd, bwd] = six_classes(digits[static_cast<size_t>(i) - 1]);
            classes[static_cast<size_t>(2 * i - 1)] = fwd;
            classes[static_cast<size_t>(2 * i)] = bwd;
        }
    }

    Digraph ga = proto;
    Classification ca = classes;
    if (vc.path) {
        if (v_end == ga.start) throw std::runtime_error("end vertex equals the start");
        Edge closing;
        closing.id = ga.m() + 1;
        closing.src = v_end;
        closing.dst = ga.start;
        closing.cost = 0;
        ga.edges.push_back(closing);
        ga.build_index();
        ca.push_back(EdgeClass::One);
    }
    std::map<VertexId, long long> imbalance;
    for (const auto& v : ga.vertices) imbalance[v] = 0;
    TraversalProfile prof = solve_counts(ga, ca, imbalance);
    std::vector<int> circuit = hierholzer(ga, prof);
    if (vc.path) {
        int closing_id = ga.m();
        auto it = std::find(circuit.begin(), circuit.end(), closing_id);
        if (it == circuit.end()) throw std::runtime_error("closing edge missing from the walk");
        std::rotate(circuit.begin(), it + 1, circuit.end());
        if (circuit.back() != closing_id) throw std::logic_error("closing rotation failed");
        circuit.pop_back();
    }
    for (int id : circuit) res.walk.edges.push_back(vc.directed ? id : (id + 1) / 2);
    res.bits_read = static_cast<long long>(tape.consumed());
    return res;
}

AdviceTape known_record_tape(const Digraph& instance, const Digraph& proto,
                             const VariantConfig& vc, const OptimalSolution& sol) {
    AdviceTape tape;
    if (vc.unit) return tape;
    if (vc.path) {
        std::vector<VertexId> order = proto.vertices;
        std::sort(order.begin(), order.end());
        auto it = std::find(order.begin(), order.end(), sol.v_end);
        tape.write_fixed(static_cast<long long>(it - order.begin()), index_field_width(proto.n()));
    }
    std::vector<int> digits;
    if (vc.directed) {
        for (int i = 1; i <= proto.m(); i++)
            digits.push_back(static_cast<int>(sol.classes[static_cast<size_t>(i)]));
        tape.pack_choices(digits, 3);
    } else {
        for (int i = 1; i <= instance.m(); i++)
            digits.push_back(six_symbol(sol.profile[static_cast<size_t>(2 * i - 1)],
                                        sol.profile[static_cast<size_t>(2 * i)]));
        tape.pack_choices(digits, 6);
    }
    return tape;
}

void check_variant_inputs(const Digraph& instance, const VariantConfig& vc) {
    if (instance.directed != vc.directed)
        throw std::runtime_error("instance orientation does not match the variant");
    if (vc.unit) {
        if (!vc.known) throw std::runtime_error("unit mode requires a known variant");
        for (const auto& e : instance.edges)
            if (e.cost != 1) throw std::runtime_error("unit mode requires unit costs");
    }
}

}  // namespace

RecordedRun record_run(const Digraph& instance, const VariantConfig& vc) {
    check_variant_inputs(instance, vc);
    RecordedRun rr;
    rr.proto = vc.directed ? instance : double_orient(instance);
    Closure closure = vc.path ? Closure::Path : Closure::Cyclic;
    rr.solution = solve(rr.proto, closure);

    if (vc.known) {
        rr.tape = known_record_tape(instance, rr.proto, vc, rr.solution);
        AdviceTape copy = rr.tape;
        rr.run = known_replay(instance, rr.proto, vc, std::move(copy));
    } else {
        Digraph ga = rr.proto;
        TraversalProfile prof = rr.solution.profile;
        std::vector<int> walk_a = rr.solution.walk.edges;
        int closing_id = 0;
        if (vc.path) {
            augment_with_closing(ga, prof, rr.solution.v_end);
            closing_id = ga.m();
            walk_a.push_back(closing_id);
        }
        std::vector<int> last_pos(prof.size(), -1);
        for (size_t i = 0; i < walk_a.size(); i++) last_pos[static_cast<size_t>(walk_a[i])] = static_cast<int>(i);
        RecordChannel ch(ga, prof, last_pos, closing_id, vc.path, rr.solution.v_end, rr.proto.n());
        Env env(instance);
        ProtocolExplorer ex(env, ch, vc);
        rr.run = ex.run();
        rr.tape = ch.finish();
        if (rr.run.bits_read != static_cast<long long>(rr.tape.written()))
            throw std::logic_error("recorded bit account disagrees with the tape length");
    }

    long long want = walk_cost(rr.proto, rr.solution.walk);
    long long got = walk_cost(instance, rr.run.walk);
    if (want != got) throw std::logic_error("explorer walk cost differs from the optimum");
    return rr;
}

ExploreResult replay_run(const Digraph& instance, const VariantConfig& vc, const AdviceTape& tape) {
    check_variant_inputs(instance, vc);
    if (vc.known) {
        Digraph proto = vc.directed ? instance : double_orient(instance);
        AdviceTape copy = tape;
        return known_replay(instance, proto, vc, std::move(copy));
    }
    ReplayChannel ch(tape, vc.path, instance.n());
    Env env(instance);
    ProtocolExplorer ex(env, ch, vc);
    return ex.run();
}

}  // namespace advex
