// Organizational roles, real and honey hosts, captured traffic profiles,
// per-connection generation, and heartbeat/report message construction.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "honeyroles/detection.hpp"
#include "honeyroles/rng.hpp"
#include "honeyroles/topology.hpp"

namespace honeyroles {

using RoleId = std::int32_t;

enum class HostKind : std::uint8_t { Real = 1, Honey = 2 };

struct Host {
    HostId id = -1;
    std::uint32_t ip = 0;
    std::uint64_t mac = 0;  // low 48 bits
    HostKind kind = HostKind::Real;
    std::optional<RoleId> role;
    SwitchId edge = -1;  // attachment switch
};

// Owns all hosts of a world and enforces ip/mac uniqueness across them.
class HostRegistry {
public:
    HostId add(Host host);
    const Host& host(HostId id) const { return hosts_.at(static_cast<std::size_t>(id)); }
    int count() const { return static_cast<int>(hosts_.size()); }

    // Client hosts of one kind and role, in id order. Servers are excluded.
    const std::vector<HostId>& members(HostKind kind, RoleId role) const;

    std::uint32_t fresh_sequential_ip();
    std::uint64_t fresh_sequential_mac();
    std::uint32_t fresh_random_ip(Rng& rng);
    std::uint64_t fresh_random_mac(Rng& rng);

    void register_member(HostId id);

private:
    std::vector<Host> hosts_;
    std::map<std::pair<int, RoleId>, std::vector<HostId>> members_;
    std::vector<std::uint32_t> ips_;
    std::vector<std::uint64_t> macs_;
    std::uint32_t next_ip_ = 0x0a000001;        // 10.0.0.1
    std::uint64_t next_mac_ = 0x020000000001ULL;  // locally administered
};

struct RoleProfile {
    RoleId role = 0;
    std::vector<HostId> real_members;
    double honey_factor = 1.0;  // honey count = ceil(honey_factor * |real_members|)
    std::vector<HostId> honey_members;
    std::vector<HostId> servers;
    std::string credential_stub;
};

// Harpoon-style per-pair traffic statistics over a capture interval.
struct HeaderKey {
    std::string protocol;
    std::uint16_t port = 0;
    std::uint64_t mac = 0;
    friend auto operator<=>(const HeaderKey&, const HeaderKey&) = default;
};

struct PairTraffic {
    double payload_size_mean = 0.0;       // bytes
    double active_sessions_mean = 0.0;    // per interval
    double inter_arrival_mean = 0.0;      // seconds
    std::vector<double> inter_connection_gaps;     // empirical sample, seconds
    std::map<HeaderKey, double> header_distribution;  // sums to 1
};

struct TrafficProfile {
    double interval = 0.0;  // seconds
    std::map<std::pair<HostId, HostId>, PairTraffic> pairs;
};

// One observed request with its timing/size annotations.
struct ObservedConnection {
    HostId source = -1;
    HostId destination = -1;
    double start_time = 0.0;  // seconds
    std::uint32_t payload_size = 0;
    std::string protocol = "https";
    std::uint16_t port = 443;
    std::uint64_t mac = 0;
};

struct Heartbeat {
    std::uint64_t destination_mac = 0;
    std::uint32_t destination_ip = 0;
    std::uint16_t destination_port = 0;
    std::uint32_t rre_count = 1;
    double rre_interval = 0.0;      // seconds
    std::string app_protocol_info;  // opaque token (URL, credential stub, ...)
    double estimated_timeout = 0.0;  // seconds
};

struct HoneyReport {
    HostId agent = -1;
    int interval = 0;  // round index
    std::uint32_t requests_sent = 0;
    std::vector<Alert> alerts;
};

enum class OutcomeKind : std::uint8_t { Delivered, Attacked, BenignDrop };

struct ConnectionOutcome {
    OutcomeKind kind = OutcomeKind::Delivered;
    AttackKind attack = AttackKind::SslStrip;  // meaningful when kind == Attacked
};

struct Connection {
    std::uint32_t id = 0;
    HostKind kind = HostKind::Real;
    RoleId role = 0;
    HostId source = -1;
    HostId destination = -1;
    ForwardingPath path;
    int round = 0;
    ConnectionOutcome outcome;
};

struct AddressExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WorldConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Creates ceil(honey_factor * |real_members|) honey hosts with fresh random
// ip/mac and uniformly random edge-switch attachment, registers them, and
// records their ids in the profile. The assignment stays fixed afterwards.
std::vector<HostId> instantiate_honey_hosts(RoleProfile& profile, const Topology& topo,
                                            HostRegistry& registry, Rng& rng);

// Draws one connection: kind (honey with probability honey_ratio), role
// (uniform), source (uniform over that kind and role's members), destination
// (uniform over the role's servers), path (uniform over the enumerated
// paths), in that fixed order.
Connection generate_connection(const std::vector<RoleProfile>& roles, const HostRegistry& registry,
                               PathCache& paths, double honey_ratio, Rng& rng, int round,
                               std::uint32_t connection_id);

TrafficProfile capture_profile(const std::vector<ObservedConnection>& observed, double interval);

Heartbeat build_heartbeat(const TrafficProfile& profile, const Host& server,
                          std::size_t fixed_size, Rng& rng, double estimated_timeout = 5.0);

HoneyReport build_report(const Host& agent, int round, std::uint32_t sent,
                         const std::vector<Alert>& alerts);

// Canonical byte serialization: field order as declared, fixed-width
// big-endian integers, zero padding up to fixed_size. Throws
// std::length_error when the mandatory fields do not fit.
std::vector<std::uint8_t> serialize_heartbeat(const Heartbeat& hb, std::size_t fixed_size);
std::vector<std::uint8_t> serialize_report(const HoneyReport& report, std::size_t fixed_size);

constexpr std::size_t kDefaultHeartbeatSize = 512;
constexpr std::size_t kDefaultReportSize = 512;

}  // namespace honeyroles
