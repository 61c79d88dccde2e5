#include "honeyroles/enterprise.hpp"

#include <algorithm>
#include <cmath>

namespace honeyroles {

namespace {

bool contains_u32(const std::vector<std::uint32_t>& xs, std::uint32_t x) {
    return std::find(xs.begin(), xs.end(), x) != xs.end();
}
bool contains_u64(const std::vector<std::uint64_t>& xs, std::uint64_t x) {
    return std::find(xs.begin(), xs.end(), x) != xs.end();
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(v >> shift));
}
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(v >> shift));
}
void put_mac(std::vector<std::uint8_t>& out, std::uint64_t mac) {
    for (int shift = 40; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(mac >> shift));
}
std::uint64_t micros(double seconds) {
    return static_cast<std::uint64_t>(std::llround(seconds * 1e6));
}

// ceil with protection against ties like 0.1*30 landing just above an integer
int honey_count_for(double factor, std::size_t real_count) {
    const double x = factor * static_cast<double>(real_count);
    const double nearest = std::nearbyint(x);
    if (std::abs(x - nearest) < 1e-9) return static_cast<int>(nearest);
    return static_cast<int>(std::ceil(x));
}

}  // namespace

HostId HostRegistry::add(Host host) {
    if (contains_u32(ips_, host.ip)) throw std::invalid_argument("HostRegistry: duplicate ip");
    if (contains_u64(macs_, host.mac)) throw std::invalid_argument("HostRegistry: duplicate mac");
    host.id = static_cast<HostId>(hosts_.size());
    ips_.push_back(host.ip);
    macs_.push_back(host.mac);
    hosts_.push_back(host);
    return host.id;
}

void HostRegistry::register_member(HostId id) {
    const Host& h = host(id);
    if (!h.role) throw std::invalid_argument("HostRegistry: member without role");
    members_[{static_cast<int>(h.kind), *h.role}].push_back(id);
}

const std::vector<HostId>& HostRegistry::members(HostKind kind, RoleId role) const {
    static const std::vector<HostId> empty;
    const auto it = members_.find({static_cast<int>(kind), role});
    return it == members_.end() ? empty : it->second;
}

std::uint32_t HostRegistry::fresh_sequential_ip() {
    while (contains_u32(ips_, next_ip_)) ++next_ip_;
    return next_ip_++;
}

std::uint64_t HostRegistry::fresh_sequential_mac() {
    while (contains_u64(macs_, next_mac_)) ++next_mac_;
    return next_mac_++;
}

std::uint32_t HostRegistry::fresh_random_ip(Rng& rng) {
    // honey addresses live in 10.128.0.0/9 so they never collide with the
    // sequential allocator by construction
    for (int attempt = 0; attempt < 4096; ++attempt) {
        const std::uint32_t ip = 0x0a800000u | static_cast<std::uint32_t>(rng.index(1u << 23));
        if (!contains_u32(ips_, ip)) return ip;
    }
    throw AddressExhausted("no free ip after 4096 attempts");
}

std::uint64_t HostRegistry::fresh_random_mac(Rng& rng) {
    for (int attempt = 0; attempt < 4096; ++attempt) {
        const std::uint64_t mac = 0x060000000000ULL | rng.index(1ULL << 40);
        if (!contains_u64(macs_, mac)) return mac;
    }
    throw AddressExhausted("no free mac after 4096 attempts");
}

std::vector<HostId> instantiate_honey_hosts(RoleProfile& profile, const Topology& topo,
                                            HostRegistry& registry, Rng& rng) {
    const auto edges = topo.edge_switches();
    if (edges.empty()) throw WorldConfigError("topology has no edge switches");

    const int count = honey_count_for(profile.honey_factor, profile.real_members.size());
    std::vector<HostId> created;
    created.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Host host;
        host.ip = registry.fresh_random_ip(rng);
        host.mac = registry.fresh_random_mac(rng);
        host.kind = HostKind::Honey;
        host.role = profile.role;
        host.edge = edges[rng.index(edges.size())];
        const HostId id = registry.add(host);
        registry.register_member(id);
        created.push_back(id);
    }
    profile.honey_members.insert(profile.honey_members.end(), created.begin(), created.end());
    return created;
}

Connection generate_connection(const std::vector<RoleProfile>& roles, const HostRegistry& registry,
                               PathCache& paths, double honey_ratio, Rng& rng, int round,
                               std::uint32_t connection_id) {
    if (roles.empty()) throw WorldConfigError("generate_connection: no roles");

    Connection conn;
    conn.id = connection_id;
    conn.round = round;
    conn.kind = rng.bernoulli(honey_ratio) ? HostKind::Honey : HostKind::Real;
    conn.role = static_cast<RoleId>(rng.index(roles.size()));

    const RoleProfile& profile = roles[static_cast<std::size_t>(conn.role)];
    const auto& sources = registry.members(conn.kind, conn.role);
    if (sources.empty())
        throw WorldConfigError("generate_connection: role has no members of requested kind");
    if (profile.servers.empty()) throw WorldConfigError("generate_connection: role has no servers");

    conn.source = sources[rng.index(sources.size())];
    conn.destination = profile.servers[rng.index(profile.servers.size())];

    const SwitchId src_edge = registry.host(conn.source).edge;
    const SwitchId dst_edge = registry.host(conn.destination).edge;
    const auto& candidates = paths.paths(src_edge, dst_edge);
    conn.path = select_path(candidates, rng);
    return conn;
}

TrafficProfile capture_profile(const std::vector<ObservedConnection>& observed, double interval) {
    if (observed.empty()) throw std::invalid_argument("capture_profile: no observations");
    if (interval <= 0) throw std::invalid_argument("capture_profile: interval must be positive");

    std::map<std::pair<HostId, HostId>, std::vector<const ObservedConnection*>> by_pair;
    for (const auto& obs : observed) by_pair[{obs.source, obs.destination}].push_back(&obs);

    TrafficProfile profile;
    profile.interval = interval;
    for (auto& [pair, group] : by_pair) {
        std::sort(group.begin(), group.end(), [](const ObservedConnection* a, const ObservedConnection* b) {
            return a->start_time < b->start_time;
        });

        PairTraffic traffic;
        double payload_sum = 0;
        std::map<HeaderKey, int> header_counts;
        for (const auto* obs : group) {
            payload_sum += obs->payload_size;
            ++header_counts[{obs->protocol, obs->port, obs->mac}];
        }
        traffic.payload_size_mean = payload_sum / static_cast<double>(group.size());

        for (std::size_t i = 1; i < group.size(); ++i)
            traffic.inter_connection_gaps.push_back(group[i]->start_time - group[i - 1]->start_time);
        if (!traffic.inter_connection_gaps.empty()) {
            double gap_sum = 0;
            for (double gap : traffic.inter_connection_gaps) gap_sum += gap;
            traffic.inter_arrival_mean =
                gap_sum / static_cast<double>(traffic.inter_connection_gaps.size());
        }

        const double duration =
            std::max(group.back()->start_time - group.front()->start_time, interval);
        traffic.active_sessions_mean =
            static_cast<double>(group.size()) / (duration / interval);

        for (const auto& [key, count] : header_counts)
            traffic.header_distribution[key] =
                static_cast<double>(count) / static_cast<double>(group.size());

        profile.pairs[pair] = std::move(traffic);
    }
    return profile;
}

Heartbeat build_heartbeat(const TrafficProfile& profile, const Host& server,
                          std::size_t fixed_size, Rng& rng, double estimated_timeout) {
    // Merge the profile entries destined for this server; fall back to the
    // whole profile when it was captured against other destinations.
    std::vector<const PairTraffic*> relevant;
    for (const auto& [pair, traffic] : profile.pairs)
        if (pair.second == server.id) relevant.push_back(&traffic);
    if (relevant.empty())
        for (const auto& [pair, traffic] : profile.pairs) relevant.push_back(&traffic);
    if (relevant.empty()) throw std::invalid_argument("build_heartbeat: empty profile");

    std::vector<double> gaps;
    double mean_sum = 0, sessions_sum = 0;
    std::map<HeaderKey, double> header_mass;
    for (const auto* traffic : relevant) {
        gaps.insert(gaps.end(), traffic->inter_connection_gaps.begin(),
                    traffic->inter_connection_gaps.end());
        mean_sum += traffic->inter_arrival_mean;
        sessions_sum += traffic->active_sessions_mean;
        for (const auto& [key, mass] : traffic->header_distribution) header_mass[key] += mass;
    }
    const double inter_arrival = mean_sum / static_cast<double>(relevant.size());
    const double sessions = sessions_sum / static_cast<double>(relevant.size());

    Heartbeat hb;
    hb.destination_mac = server.mac;
    hb.destination_ip = server.ip;
    hb.destination_port = 443;
    hb.rre_count = static_cast<std::uint32_t>(1 + rng.poisson(std::max(sessions, 0.0)));
    hb.rre_interval = gaps.empty() ? rng.exponential(inter_arrival > 0 ? inter_arrival : 1.0)
                                   : gaps[rng.index(gaps.size())];
    hb.estimated_timeout = estimated_timeout;

    HeaderKey header{"https", 443, server.mac};
    if (!header_mass.empty()) {
        // most common header wins; deterministic because the map is ordered
        double best = -1;
        for (const auto& [key, mass] : header_mass)
            if (mass > best) {
                best = mass;
                header = key;
            }
        hb.destination_port = header.port;
    }
    hb.app_protocol_info = header.protocol + "://" + std::to_string(server.ip) + ":" +
                           std::to_string(header.port) + "/";

    serialize_heartbeat(hb, fixed_size);  // validates the size budget now
    return hb;
}

HoneyReport build_report(const Host& agent, int round, std::uint32_t sent,
                         const std::vector<Alert>& alerts) {
    HoneyReport report;
    report.agent = agent.id;
    report.interval = round;
    if (agent.kind == HostKind::Honey) {
        if (alerts.size() > sent)
            throw std::invalid_argument("build_report: more alerts than requests sent");
        report.requests_sent = sent;
        report.alerts = alerts;
    }
    // real hosts report without meaningful content; the serialized form is
    // indistinguishable from a honey report of the same configured size
    return report;
}

std::vector<std::uint8_t> serialize_heartbeat(const Heartbeat& hb, std::size_t fixed_size) {
    std::vector<std::uint8_t> out;
    out.reserve(fixed_size);
    put_mac(out, hb.destination_mac);
    put_u32(out, hb.destination_ip);
    put_u16(out, hb.destination_port);
    put_u32(out, hb.rre_count);
    put_u64(out, micros(hb.rre_interval));
    if (hb.app_protocol_info.size() > 0xffff)
        throw std::length_error("serialize_heartbeat: app_protocol_info too large");
    put_u16(out, static_cast<std::uint16_t>(hb.app_protocol_info.size()));
    out.insert(out.end(), hb.app_protocol_info.begin(), hb.app_protocol_info.end());
    put_u64(out, micros(hb.estimated_timeout));
    if (out.size() > fixed_size)
        throw std::length_error("serialize_heartbeat: mandatory fields exceed fixed size");
    out.resize(fixed_size, 0);
    return out;
}

std::vector<std::uint8_t> serialize_report(const HoneyReport& report, std::size_t fixed_size) {
    std::vector<std::uint8_t> out;
    out.reserve(fixed_size);
    put_u32(out, static_cast<std::uint32_t>(report.agent));
    put_u32(out, static_cast<std::uint32_t>(report.interval));
    put_u32(out, report.requests_sent);
    if (report.alerts.size() > 0xffff)
        throw std::length_error("serialize_report: too many alerts");
    put_u16(out, static_cast<std::uint16_t>(report.alerts.size()));
    for (const Alert& alert : report.alerts) {
        out.push_back(static_cast<std::uint8_t>(alert.kind));
        put_u32(out, alert.connection);
        put_u64(out, micros(alert.average_delay));
        put_u32(out, alert.dropped_requests);
    }
    if (out.size() > fixed_size)
        throw std::length_error("serialize_report: alerts exceed fixed size");
    out.resize(fixed_size, 0);
    return out;
}

}  // namespace honeyroles
