// Switch graph: Fat-Tree generation, GML ingestion, redundant-path
// enumeration between edge switches, and uniform random path selection.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "honeyroles/rational.hpp"
#include "honeyroles/rng.hpp"

namespace honeyroles {

using SwitchId = std::int32_t;
using HostId = std::int32_t;

enum class SwitchTier { Edge, Aggregate, Core };

const char* tier_name(SwitchTier tier);

// Loop-free switch sequence from the source host's edge switch to the
// destination host's edge switch. A single-element sequence is the
// degenerate path between hosts attached to the same edge switch.
struct ForwardingPath {
    std::vector<SwitchId> switch_sequence;

    int hops() const { return static_cast<int>(switch_sequence.size()) - 1; }
    bool contains(SwitchId sw) const;
    friend bool operator==(const ForwardingPath&, const ForwardingPath&) = default;
    friend auto operator<=>(const ForwardingPath& a, const ForwardingPath& b) {
        return a.switch_sequence <=> b.switch_sequence;
    }
};

enum class PathMode { DisjointOnly, DisjointPlusNonOptimal, OverlapTolerant };

struct PathPolicy {
    PathMode mode = PathMode::OverlapTolerant;
    int max_extra_hops = 2;           // slack over the shortest path, in hops
    double max_overlap_fraction = 1.0;  // OverlapTolerant only

    friend bool operator==(const PathPolicy&, const PathPolicy&) = default;
};

class Topology {
public:
    SwitchId add_switch(SwitchTier tier);
    void add_link(SwitchId a, SwitchId b);
    void attach_host(HostId host, SwitchId sw);

    int switch_count() const { return static_cast<int>(tiers_.size()); }
    SwitchTier tier(SwitchId sw) const { return tiers_.at(static_cast<std::size_t>(sw)); }
    bool has_link(SwitchId a, SwitchId b) const;
    const std::vector<SwitchId>& neighbors(SwitchId sw) const {
        return adjacency_.at(static_cast<std::size_t>(sw));
    }
    int link_count() const { return link_count_; }

    std::vector<SwitchId> edge_switches() const;
    const std::unordered_map<HostId, SwitchId>& attachments() const { return attachments_; }
    SwitchId attachment(HostId host) const { return attachments_.at(host); }

    bool connected() const;

private:
    std::vector<SwitchTier> tiers_;
    std::vector<std::vector<SwitchId>> adjacency_;
    int link_count_ = 0;
    std::unordered_map<HostId, SwitchId> attachments_;
};

struct NoPathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GmlError : std::runtime_error {
    GmlError(int line, const std::string& what)
        : std::runtime_error("gml:" + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

// Three-tier generator. Each edge switch links to every aggregate switch in
// its pod; core c links to the aggregate with local index c % agg_per_pod in
// every pod, striping cores across the aggregation layer.
//
// Switch ids are dense and tier-ordered: edges first (pod-major), then
// aggregates (one block per pod), then cores.
Topology build_fat_tree(int pods, int edge_per_pod, int agg_per_pod, int cores);

// The 14-switch preset used by the stock configuration: 4 pods of 2 edge +
// 1 aggregate switch, plus 2 cores. Edge ids 0..7, aggregates 8..11,
// cores 12..13.
Topology paper14_preset();

std::optional<Topology> topology_preset(const std::string& name);

// Parses a GML graph (Topology-Zoo style node/edge blocks). Nodes without a
// tier attribute default to Edge. Nested blocks such as graphics are skipped.
Topology load_gml(const std::string& text);

// All forwarding paths between two edge switches that satisfy the policy,
// ordered lexicographically by switch sequence. Deterministic for a given
// (topology, src, dst, policy). Throws NoPathError when disconnected.
std::vector<ForwardingPath> enumerate_paths(const Topology& topo, SwitchId src, SwitchId dst,
                                            const PathPolicy& policy);

// Uniform random choice; never weighted by belief state.
const ForwardingPath& select_path(const std::vector<ForwardingPath>& paths, Rng& rng);

// Probability that an adversary on one of p disjoint paths scans a real
// connection: r / (p * (r + h)).
Rational scan_probability(std::int64_t real_count, std::int64_t honey_count, std::int64_t path_count);

// Memoizes enumerate_paths per (src, dst); one instance per simulation
// sample, not shared across threads. Same-switch pairs yield the
// single-switch path.
class PathCache {
public:
    PathCache(const Topology& topo, PathPolicy policy) : topo_(&topo), policy_(policy) {}

    const std::vector<ForwardingPath>& paths(SwitchId src, SwitchId dst);
    const PathPolicy& policy() const { return policy_; }

private:
    const Topology* topo_;
    PathPolicy policy_;
    std::map<std::pair<SwitchId, SwitchId>, std::vector<ForwardingPath>> cache_;
};

}  // namespace honeyroles
