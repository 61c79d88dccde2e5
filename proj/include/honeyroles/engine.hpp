// Round and sample orchestration: wires connection generation, adversary
// decisions, outcome simulation, detection, and belief updates into
// deterministic Monte Carlo experiments.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "honeyroles/adversary.hpp"
#include "honeyroles/bms.hpp"
#include "honeyroles/detection.hpp"
#include "honeyroles/enterprise.hpp"
#include "honeyroles/topology.hpp"

namespace honeyroles {

struct SimConfig {
    // environment
    int roles = 3;
    int rounds = 100;
    int round_length = 100;  // connections per round
    std::string topology_preset = "paper-14";
    std::optional<std::string> gml_text;  // wins over the preset when set

    // nodes
    int real_hosts = 50;
    double honey_factor = 1.0;
    int servers = 6;
    double honey_ratio = 0.5;

    // paths
    PathPolicy path_policy;

    // adversary; selectors are "<tier>:<index>" or plain switch ids
    std::vector<std::string> compromised_selectors;
    RoleId target_role = 0;
    int confidence_init = 10;
    int confidence_cap = 90;
    double increase_weight = 2.0 / 3.0;

    // detector
    DetectorConfig detector;

    // bms
    double beta = 0.2;
    bool prism_counter_init = false;
    std::optional<double> risk_threshold;  // reporting only

    // run
    int samples = 50;
    std::uint64_t master_seed = 42;
    bool record_connections = false;
};

Topology build_topology(const SimConfig& cfg);

// "edge:1" -> second edge switch in id order; "aggregate:0"/"agg:0",
// "core:1" likewise; a bare integer is taken as a raw switch id.
SwitchId resolve_switch_selector(const Topology& topo, const std::string& selector);
std::vector<SwitchId> resolve_compromised(const SimConfig& cfg, const Topology& topo);

// One simulation sample's mutable state. Host placement, role membership,
// and honey instantiation are all drawn from the sample's own stream, so a
// sample is reproducible from (config, sample_seed) alone.
class World {
public:
    World(const SimConfig& cfg, std::uint64_t sample_seed);
    World(const World&) = delete;
    World& operator=(const World&) = delete;

    Rng rng;
    Topology topo;
    HostRegistry hosts;
    std::vector<RoleProfile> roles;
    PathCache paths;
    AdversaryConfig adversary_cfg;
    AdversaryState adversary;
    BeliefTable beliefs;
    DetectorBank detectors;
    std::uint32_t next_connection_id = 0;
};

struct SwitchRoundStat {
    int a = 0;
    int c = 0;
    double r = 0.0;
    double R = 0.0;
};

struct RoundResult {
    int round = 0;  // 1-based
    std::vector<SwitchRoundStat> switches;
    Ranking ranking;
    int confidence = 0;  // adversary confidence in effect during the round
    int attacks = 0;
    int alarms = 0;
    int honey_connections = 0;
    int real_connections = 0;
    // independent accumulations used to cross-check the belief counters
    long long honey_path_switch_sum = 0;
    long long alerted_path_switch_sum = 0;
    std::vector<Connection> connections;  // populated when record_connections
};

RoundResult run_round(World& world, const SimConfig& cfg, int round_index);

// One deterministic trajectory of `rounds` rounds under sample_seed.
std::vector<RoundResult> run_experiment(const SimConfig& cfg, std::uint64_t sample_seed);

struct CompromisedSwitchStats {
    SwitchId sw = -1;
    std::vector<double> mean_rank_per_round;  // over samples, [round]
    // fraction of post-warm-up rounds the switch holds the given aggregate rank
    double frac_top1 = 0.0;
    double frac_top2 = 0.0;
    double frac_top5 = 0.0;
};

struct ExperimentResult {
    std::vector<SwitchTier> tiers;     // per switch
    std::vector<SwitchId> compromised;
    std::vector<std::vector<RoundResult>> samples;  // [sample][round]

    // aggregates over samples, [round][switch]
    std::vector<std::vector<double>> mean_R;
    std::vector<std::vector<double>> mean_rank;
    std::vector<std::vector<int>> rank_of_mean;  // 1-based rank within mean_R

    std::vector<CompromisedSwitchStats> compromised_stats;
    // first round (1-based) with every compromised switch inside the
    // aggregate top-k, for k = 1, 2, 5; -1 when never reached
    int detection_latency_top1 = -1;
    int detection_latency_top2 = -1;
    int detection_latency_top5 = -1;
};

// Rounds ignored by the post-warm-up statistics.
constexpr int kWarmupRounds = 10;

// Runs `cfg.samples` independent samples with seeds derived from the master
// seed and aggregates them. Samples execute in parallel with OpenMP when
// `parallel` is set; the result is identical to the serial reference either
// way because every sample owns its stream and state.
ExperimentResult monte_carlo(const SimConfig& cfg, bool parallel = true);

}  // namespace honeyroles
