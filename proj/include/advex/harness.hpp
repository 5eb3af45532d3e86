#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advex/explorer.hpp"
#include "advex/graph.hpp"

namespace advex {

struct GenSpec {
    int n = 6;
    int m = 10;
    long long max_cost = 10;
    bool undirected = false;
    std::uint64_t seed = 0;
};

// Seeded, reproducible instance generation: directed graphs get a random
// backbone cycle plus extra edges (strong connectivity guaranteed), undirected
// ones a random spanning tree plus extra edges.
Digraph generate(const GenSpec& spec);

// Directed bottleneck instance: entry spokes start->v_i->hub, exit spokes
// hub->w_j->sink, one return edge sink->start. Every exit spoke needs its own
// pass through the hub, so optimal tours repeat entry edges; these shapes force
// multi-traversal counts that random instances almost never produce.
Digraph funnel_instance(int entry_width, int exit_width, long long entry_cost,
                        long long exit_cost);

struct RunReport {
    std::string instance;
    std::string variant;
    int n = 0, m = 0;
    long long opt_cost = 0;
    long long tour_cost = 0;
    long long bits_read = 0;
    double bound = 0.0;
    bool ok = false;
    std::string error;
};

// Advice budget of a variant as a function of the reported instance size.
double advice_bound(const VariantConfig& vc, int n, int m);

// Record, replay, cross-check and validate one instance under one variant.
// Protocol failures are reported through ok/error, not exceptions.
RunReport run_variant(const Digraph& instance, const VariantConfig& vc,
                      const std::string& instance_id);

// The eight standard rows for one instance; known variants switch to the
// zero-advice unit protocol when every cost is 1.
std::vector<RunReport> run_all(const Digraph& instance, const std::string& instance_id);

// g(1..max_y) of the count-encoding budget recursion
//   g(y) = max_{2<=x<=y/2} ( log2(x) + 2 log2(log2(x)) + g(y-x) + g(x) )
// with g(1)=g(2)=g(3)=0 and log2(log2(2)) taken as 0. Throws if any value
// exceeds 2.5y - 3log2(y) - 3 for y >= 4.
std::vector<double> g_table(int max_y);

std::string csv_header();
std::string csv_row(const RunReport& r);

struct CorpusResult {
    std::vector<RunReport> reports;
    std::vector<std::string> rejected;  // instances failing validation, with reasons
    int failures() const {
        int f = 0;
        for (const auto& r : reports) f += r.ok ? 0 : 1;
        return f;
    }
};

// Run every instance of the corpus under all eight variants in parallel;
// reports are sorted by (instance id, variant order).
CorpusResult run_corpus(const std::vector<std::pair<std::string, Digraph>>& instances);

// The default 424-instance corpus: 200 random directed and 200 random
// undirected instances (n in [3,9], m <= 18, costs in [1,10], roughly a tenth
// all-unit), plus 24 funnel instances covering entry widths 2..4 and exit
// widths 3..6 in unit and weighted versions.
std::vector<std::pair<std::string, Digraph>> default_corpus(std::uint64_t seed);

}  // namespace advex
