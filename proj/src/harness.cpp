#include "advex/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "advex/oracle.hpp"

namespace advex {

namespace {

std::string vertex_name(int i, int n) {
    std::string num = std::to_string(i);
    std::string widest = std::to_string(n);
    return "v" + std::string(widest.size() - num.size(), '0') + num;
}

}  // namespace

Digraph generate(const GenSpec& spec) {
    if (spec.n < 2) throw std::runtime_error("generator needs at least two vertices");
    if (spec.max_cost < 1) throw std::runtime_error("generator needs a positive cost range");
    int need = spec.undirected ? spec.n - 1 : spec.n;
    if (spec.m < need)
        throw std::runtime_error("infeasible generator spec: " + std::to_string(spec.m) +
                                 " edges cannot connect " + std::to_string(spec.n) + " vertices");

    std::mt19937_64 rng(spec.seed);
    auto pick = [&](long long lo, long long hi) {
        return lo + static_cast<long long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };

    Digraph g;
    g.directed = !spec.undirected;
    for (int i = 1; i <= spec.n; i++) g.vertices.push_back(vertex_name(i, spec.n));
    g.start = g.vertices.front();

    std::vector<int> perm(static_cast<size_t>(spec.n));
    for (int i = 0; i < spec.n; i++) perm[static_cast<size_t>(i)] = i;
    for (int i = spec.n - 1; i > 0; i--)
        std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(pick(0, i))]);

    auto add_edge = [&](int a, int b) {
        Edge e;
        e.id = static_cast<int>(g.edges.size()) + 1;
        e.src = g.vertices[static_cast<size_t>(a)];
        e.dst = g.vertices[static_cast<size_t>(b)];
        e.cost = pick(1, spec.max_cost);
        g.edges.push_back(std::move(e));
    };

    if (g.directed) {
        for (int i = 0; i < spec.n; i++)
            add_edge(perm[static_cast<size_t>(i)], perm[static_cast<size_t>((i + 1) % spec.n)]);
    } else {
        for (int i = 1; i < spec.n; i++)
            add_edge(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(pick(0, i - 1))]);
    }
    while (static_cast<int>(g.edges.size()) < spec.m) {
        int a = static_cast<int>(pick(0, spec.n - 1));
        int b = static_cast<int>(pick(0, spec.n - 2));
        if (b >= a) b++;
        add_edge(a, b);
    }

    g.validate();
    g.build_index();
    if (g.directed ? !is_strongly_connected(g) : !is_connected(g))
        throw std::logic_error("generated instance is not connected");
    return g;
}

Digraph funnel_instance(int entry_width, int exit_width, long long entry_cost,
                        long long exit_cost) {
    if (entry_width < 1 || exit_width < 1)
        throw std::runtime_error("funnel widths must be positive");
    if (entry_cost < 1 || exit_cost < 1)
        throw std::runtime_error("funnel costs must be positive");
    Digraph g;
    g.directed = true;
    g.start = "y";
    g.vertices = {"y"};
    for (int i = 0; i < entry_width; i++) g.vertices.push_back("v" + std::to_string(i));
    g.vertices.push_back("x");
    for (int j = 0; j < exit_width; j++) g.vertices.push_back("m" + std::to_string(j));
    g.vertices.push_back("c");
    int id = 1;
    for (int i = 0; i < entry_width; i++)
        g.edges.push_back({id++, "y", "v" + std::to_string(i), entry_cost});
    for (int i = 0; i < entry_width; i++)
        g.edges.push_back({id++, "v" + std::to_string(i), "x", entry_cost});
    for (int j = 0; j < exit_width; j++)
        g.edges.push_back({id++, "x", "m" + std::to_string(j), exit_cost});
    for (int j = 0; j < exit_width; j++)
        g.edges.push_back({id++, "m" + std::to_string(j), "c", exit_cost});
    g.edges.push_back({id++, "c", "y", 1});
    g.validate();
    g.build_index();
    return g;
}

std::vector<std::pair<std::string, Digraph>> default_corpus(std::uint64_t seed) {
    std::vector<std::pair<std::string, Digraph>> out;
    std::mt19937_64 meta(seed);
    auto pick = [&](int lo, int hi) {
        return lo + static_cast<int>(meta() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    for (int kind = 0; kind < 2; kind++) {
        bool undirected = kind == 1;
        for (int i = 0; i < 200; i++) {
            GenSpec s;
            s.undirected = undirected;
            s.n = pick(3, 9);
            int low = undirected ? s.n - 1 : s.n;
            s.m = pick(low, 18);
            s.max_cost = i % 10 == 0 ? 1 : 10;
            s.seed = meta();
            std::ostringstream id;
            id << (undirected ? "u" : "d") << std::setw(3) << std::setfill('0') << i;
            out.emplace_back(id.str(), generate(s));
        }
    }
    int fi = 0;
    for (int entry = 2; entry <= 4; entry++) {
        for (int exit = 3; exit <= 6; exit++) {
            for (bool weighted : {false, true}) {
                std::ostringstream id;
                id << 'f' << std::setw(3) << std::setfill('0') << fi++;
                out.emplace_back(id.str(), weighted ? funnel_instance(entry, exit, 2, 3)
                                                    : funnel_instance(entry, exit, 1, 1));
            }
        }
    }
    return out;
}

double advice_bound(const VariantConfig& vc, int n, int m) {
    if (vc.unit) return 0.0;
    if (vc.known) {
        double b = std::ceil(m * std::log2(vc.directed ? 3.0 : 6.0));
        if (vc.path) b += std::ceil(std::log2(static_cast<double>(n)));
        return b;
    }
    double b = vc.directed ? 2.0 * n + 23.0 * m
                           : std::log2(6.0) * (n + m) + 42.0 * m;
    if (vc.path) b += std::ceil(std::log2(static_cast<double>(n - 1)));
    return b;
}

RunReport run_variant(const Digraph& instance, const VariantConfig& vc,
                      const std::string& instance_id) {
    RunReport rep;
    rep.instance = instance_id;
    rep.variant = vc.name();
    try {
        Digraph adapted;
        if (vc.directed == instance.directed)
            adapted = instance;
        else if (vc.directed)
            adapted = double_orient(instance);
        else
            adapted = drop_orientation(instance);
        rep.n = adapted.n();
        rep.m = adapted.m();
        rep.bound = advice_bound(vc, rep.n, rep.m);

        RecordedRun rr = record_run(adapted, vc);
        rep.opt_cost = walk_cost(rr.proto, rr.solution.walk);
        rep.tour_cost = walk_cost(adapted, rr.run.walk);
        rep.bits_read = rr.run.bits_read;

        ValidationReport vr;
        if (vc.path) {
            Digraph ga = rr.proto;
            TraversalProfile prof = rr.solution.profile;
            augment_with_closing(ga, prof, rr.solution.v_end);
            Walk closed = rr.solution.walk;
            closed.edges.push_back(ga.m());
            vr = validate_structure(ga, prof, closed, ga.m());
        } else {
            vr = validate_structure(rr.proto, rr.solution.profile, rr.solution.walk);
        }
        if (!vr.all()) {
            rep.error = "structure: " + vr.detail;
            return rep;
        }

        ExploreResult rp = replay_run(adapted, vc, rr.tape);
        if (rp.walk.start != rr.run.walk.start || rp.walk.edges != rr.run.walk.edges) {
            rep.error = "replay diverged from the recorded run";
            return rep;
        }
        if (rp.bits_read != rr.run.bits_read) {
            rep.error = "replay consumed a different bit count";
            return rep;
        }

        rep.ok = rep.tour_cost == rep.opt_cost &&
                 static_cast<double>(rep.bits_read) <= rep.bound + 1e-9;
        if (!rep.ok) rep.error = "cost or advice budget violated";
    } catch (const std::exception& ex) {
        rep.ok = false;
        rep.error = ex.what();
    }
    return rep;
}

std::vector<RunReport> run_all(const Digraph& instance, const std::string& instance_id) {
    bool unit = instance.m() > 0;
    for (const auto& e : instance.edges)
        if (e.cost != 1) unit = false;
    std::vector<RunReport> rows;
    for (const VariantConfig& vc : all_variants()) {
        VariantConfig eff = vc;
        if (vc.known && unit) eff.unit = true;
        rows.push_back(run_variant(instance, eff, instance_id));
    }
    return rows;
}

std::vector<double> g_table(int max_y) {
    if (max_y < 4) throw std::invalid_argument("g table needs max_y >= 4");
    std::vector<double> g(static_cast<size_t>(max_y) + 1, 0.0);
    for (int y = 4; y <= max_y; y++) {
        double best = -1e300;
        for (int x = 2; x <= y / 2; x++) {
            double lx = std::log2(static_cast<double>(x));
            double ll = x == 2 ? 0.0 : std::log2(lx);
            best = std::max(best, lx + 2.0 * ll + g[static_cast<size_t>(y - x)] +
                                      g[static_cast<size_t>(x)]);
        }
        g[static_cast<size_t>(y)] = best;
        double cap = 2.5 * y - 3.0 * std::log2(static_cast<double>(y)) - 3.0;
        if (best > cap + 1e-9)
            throw std::logic_error("count budget recursion exceeded its closed-form cap at y=" +
                                   std::to_string(y));
    }
    return g;
}

std::string csv_header() {
    return "instance,variant,n,m,opt_cost,tour_cost,bits_read,bound,ok,error";
}

std::string csv_row(const RunReport& r) {
    std::string err = r.error;
    for (char& c : err)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    std::ostringstream os;
    os << r.instance << ',' << r.variant << ',' << r.n << ',' << r.m << ',' << r.opt_cost << ','
       << r.tour_cost << ',' << r.bits_read << ',' << std::fixed << std::setprecision(4) << r.bound
       << ',' << (r.ok ? "true" : "false") << ',' << err;
    return os.str();
}

CorpusResult run_corpus(const std::vector<std::pair<std::string, Digraph>>& instances) {
    CorpusResult res;
    std::vector<size_t> good;
    for (size_t i = 0; i < instances.size(); i++) {
        const Digraph& g = instances[i].second;
        bool connected = g.directed ? is_strongly_connected(g) : is_connected(g);
        if (!connected)
            res.rejected.push_back(instances[i].first + ": instance is not " +
                                   (g.directed ? "strongly connected" : "connected"));
        else
            good.push_back(i);
    }

    std::vector<std::vector<RunReport>> rows(instances.size());
    std::atomic<size_t> cursor{0};
    auto worker = [&]() {
        while (true) {
            size_t at = cursor.fetch_add(1);
            if (at >= good.size()) return;
            size_t i = good[at];
            rows[i] = run_all(instances[i].second, instances[i].first);
        }
    };
    size_t threads = std::max<size_t>(1, std::min<size_t>(std::thread::hardware_concurrency(),
                                                          good.size()));
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; t++) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::vector<size_t> order = good;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return instances[a].first < instances[b].first;
    });
    for (size_t i : order)
        for (auto& r : rows[i]) res.reports.push_back(std::move(r));
    return res;
}

}  // namespace advex
