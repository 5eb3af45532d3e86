#pragma once

#include <string>
#include <vector>

#include "advex/bits.hpp"
#include "advex/graph.hpp"
#include "advex/oracle.hpp"

namespace advex {

// One of the eight knowledge/orientation/closure combinations, plus the
// zero-advice mode for known instances whose costs are all 1.
struct VariantConfig {
    bool known = false;
    bool directed = true;
    bool path = false;
    bool unit = false;  // only valid together with known

    std::string name() const;
    bool operator==(const VariantConfig&) const = default;
};

VariantConfig parse_variant(const std::string& name);

// The eight standard variants in report order.
std::vector<VariantConfig> all_variants();

struct ExploreResult {
    Walk walk;                // on the instance graph
    long long bits_read = 0;
};

struct RecordedRun {
    ExploreResult run;
    AdviceTape tape;
    OptimalSolution solution;  // solved on the protocol graph
    Digraph proto;             // directed graph the protocol ran on
};

// Solves the instance offline, co-simulates the online explorer against the
// solution, and writes the advice tape the explorer consumed.
RecordedRun record_run(const Digraph& instance, const VariantConfig& vc);

// Runs the online explorer from the tape alone (fog of war for unknown
// variants); throws on exhausted or inconsistent advice.
ExploreResult replay_run(const Digraph& instance, const VariantConfig& vc, const AdviceTape& tape);

}  // namespace advex
