// Regenerates a PRISM DTMC (Defender/System/Adversary guarded-command
// modules) from a simulator configuration, and structurally validates the
// emitted text.

#pragma once

#include <string>
#include <vector>

#include "honeyroles/engine.hpp"
#include "honeyroles/topology.hpp"

namespace honeyroles {

struct PrismModel {
    std::string text;
    int command_count = 0;
    std::vector<std::string> module_names;
};

struct PrismViolation {
    int line = 0;
    std::string message;
};

// Forwarding paths for every ordered pair of edge switches. A pair of
// identical switches carries the single-switch path. Tags are assigned
// sequentially from 3000 in table order.
struct PathTable {
    struct Entry {
        SwitchId src = -1;
        SwitchId dst = -1;
        std::vector<ForwardingPath> paths;
    };
    std::vector<Entry> entries;

    int total_paths() const;
};

PathTable enumerate_path_table(const Topology& topo, const PathPolicy& policy);

// Emits the DTMC source: connection selection commands with the configured
// weights, per-path honey event recording with percent-rounded belief
// updates and counters reinitialized to 1, and the adversary's confidence
// machinery. Deterministic text for a given configuration.
PrismModel emit_model(const SimConfig& cfg, const Topology& topo, const PathTable& table);

// Minimal structural check of the constructs emit_model produces: module
// blocks and guarded commands parse, per-command update weights sum to
// exactly 1, identifiers are declared before use, and path tags are unique.
// Violations are data, not errors.
std::vector<PrismViolation> check_model(const PrismModel& model);

}  // namespace honeyroles
