#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "advex/bits.hpp"
#include "advex/explorer.hpp"
#include "advex/harness.hpp"
#include "advex/oracle.hpp"

namespace {

using namespace advex;

std::string file_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

nlohmann::json report_json(const RunReport& r) {
    return nlohmann::json{{"instance", r.instance}, {"variant", r.variant}, {"n", r.n},
                          {"m", r.m},               {"opt_cost", r.opt_cost}, {"tour_cost", r.tour_cost},
                          {"bits_read", r.bits_read}, {"bound", r.bound},     {"ok", r.ok},
                          {"error", r.error}};
}

int cmd_gen(int n, int m, long long max_cost, bool undirected, std::uint64_t seed,
            const std::string& out) {
    GenSpec spec;
    spec.n = n;
    spec.m = m;
    spec.max_cost = max_cost;
    spec.undirected = undirected;
    spec.seed = seed;
    Digraph g = generate(spec);
    std::string text = serialize_graph(g);
    if (out.empty())
        std::cout << text << "\n";
    else
        write_text(out, text + "\n");
    return 0;
}

int cmd_solve(const std::string& file, const std::string& variant, const std::string& tape_out,
              const std::string& report_out) {
    Digraph instance = load_graph(file);
    VariantConfig vc = parse_variant(variant);
    RunReport rep = run_variant(instance, vc, file_stem(file));

    if (!tape_out.empty()) {
        Digraph adapted;
        if (vc.directed == instance.directed)
            adapted = instance;
        else if (vc.directed)
            adapted = double_orient(instance);
        else
            adapted = drop_orientation(instance);
        RecordedRun rr = record_run(adapted, vc);
        write_text(tape_out, tape_to_json(rr.tape) + "\n");
    }

    std::string text = report_json(rep).dump(2);
    if (report_out.empty())
        std::cout << text << "\n";
    else
        write_text(report_out, text + "\n");
    if (!rep.ok) std::cerr << "solve failed: " << rep.error << "\n";
    return rep.ok ? 0 : 1;
}

int cmd_verify(const std::string& dir, const std::string& variants, const std::string& csv_out) {
    std::vector<std::pair<std::string, Digraph>> instances;
    std::vector<std::string> unreadable;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        try {
            instances.emplace_back(path.stem().string(), load_graph(path.string()));
        } catch (const std::exception& ex) {
            unreadable.push_back(path.string() + ": " + ex.what());
        }
    }

    CorpusResult res;
    if (variants == "all") {
        res = run_corpus(instances);
    } else {
        std::vector<VariantConfig> list;
        std::stringstream ss(variants);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) list.push_back(parse_variant(item));
        for (const auto& [id, g] : instances) {
            bool connected = g.directed ? is_strongly_connected(g) : is_connected(g);
            if (!connected) {
                res.rejected.push_back(id + ": instance is not connected");
                continue;
            }
            for (const auto& vc : list) res.reports.push_back(run_variant(g, vc, id));
        }
    }

    std::ostringstream csv;
    csv << csv_header() << "\n";
    for (const auto& r : res.reports) csv << csv_row(r) << "\n";
    if (csv_out.empty())
        std::cout << csv.str();
    else
        write_text(csv_out, csv.str());

    for (const auto& msg : unreadable) std::cerr << "rejected " << msg << "\n";
    for (const auto& msg : res.rejected) std::cerr << "rejected " << msg << "\n";

    // per-variant bits/bound summary
    std::map<std::string, std::tuple<double, double, double, int>> agg;  // min, max, sum, count
    for (const auto& r : res.reports) {
        if (r.bound <= 0) continue;
        double frac = static_cast<double>(r.bits_read) / r.bound;
        auto it = agg.find(r.variant);
        if (it == agg.end())
            agg[r.variant] = {frac, frac, frac, 1};
        else {
            auto& [lo, hi, sum, cnt] = it->second;
            lo = std::min(lo, frac);
            hi = std::max(hi, frac);
            sum += frac;
            cnt++;
        }
    }
    std::cerr << res.reports.size() << " rows, " << res.failures() << " failures\n";
    for (const auto& [name, t] : agg) {
        const auto& [lo, hi, sum, cnt] = t;
        std::cerr << std::left << std::setw(28) << name << " bits/bound min " << std::fixed
                  << std::setprecision(3) << lo << " max " << hi << " mean " << sum / cnt << "\n";
    }
    return res.failures() == 0 ? 0 : 1;
}

int cmd_gtable(int max_y) {
    auto g = g_table(max_y);
    std::cout << "y,g,cap\n";
    for (int y = 1; y <= max_y; y++) {
        double cap = 2.5 * y - 3.0 * std::log2(static_cast<double>(y)) - 3.0;
        std::cout << y << ',' << std::fixed << std::setprecision(4) << g[static_cast<size_t>(y)]
                  << ',' << cap << "\n";
    }
    return 0;
}

int cmd_bounds(const std::string& file) {
    Digraph instance = load_graph(file);
    bool unit = instance.m() > 0;
    for (const auto& e : instance.edges)
        if (e.cost != 1) unit = false;
    std::cout << "variant,n,m,bound\n";
    for (const VariantConfig& vc : all_variants()) {
        VariantConfig eff = vc;
        if (vc.known && unit) eff.unit = true;
        int n = instance.n(), m = instance.m();
        if (vc.directed != instance.directed && vc.directed) m *= 2;
        std::cout << eff.name() << ',' << n << ',' << m << ',' << std::fixed
                  << std::setprecision(4) << advice_bound(eff, n, m) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"advice-budget exploration of unknown graphs"};
    app.require_subcommand(1);

    int gen_n = 6, gen_m = 10;
    long long gen_cost = 10;
    bool gen_undirected = false;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "generate a random connected instance");
    gen->add_option("--n", gen_n, "vertex count");
    gen->add_option("--m", gen_m, "edge count");
    gen->add_option("--max-cost", gen_cost, "costs drawn uniformly from [1, C]");
    gen->add_flag("--undirected", gen_undirected, "generate an undirected instance");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("-o,--out", gen_out, "output file (stdout when absent)");

    std::string solve_file, solve_variant = "unknown-directed-cyclic", solve_tape, solve_report;
    auto* solve = app.add_subcommand("solve", "record, replay and check one instance");
    solve->add_option("file", solve_file, "instance file")->required();
    solve->add_option("--variant", solve_variant, "protocol variant");
    solve->add_option("--tape-out", solve_tape, "write the advice tape as JSON");
    solve->add_option("--report", solve_report, "write the run report as JSON");

    std::string verify_dir, verify_variants = "all", verify_csv;
    auto* verify = app.add_subcommand("verify", "run a corpus directory under all variants");
    verify->add_option("dir", verify_dir, "directory of instance JSON files")->required();
    verify->add_option("--variants", verify_variants, "comma list of variants, or 'all'");
    verify->add_option("--csv", verify_csv, "write the report CSV here (stdout when absent)");

    int gtable_y = 256;
    auto* gtable = app.add_subcommand("gtable", "print the count-encoding budget recursion");
    gtable->add_option("--max-y", gtable_y, "largest argument to evaluate");

    std::string bounds_file;
    auto* bounds = app.add_subcommand("bounds", "print the advice budgets for an instance");
    bounds->add_option("file", bounds_file, "instance file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_n, gen_m, gen_cost, gen_undirected, gen_seed, gen_out);
        if (solve->parsed()) return cmd_solve(solve_file, solve_variant, solve_tape, solve_report);
        if (verify->parsed()) return cmd_verify(verify_dir, verify_variants, verify_csv);
        if (gtable->parsed()) return cmd_gtable(gtable_y);
        if (bounds->parsed()) return cmd_bounds(bounds_file);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
