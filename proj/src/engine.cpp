#include "honeyroles/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace honeyroles {

Topology build_topology(const SimConfig& cfg) {
    if (cfg.gml_text) return load_gml(*cfg.gml_text);
    auto preset = topology_preset(cfg.topology_preset);
    if (!preset) throw WorldConfigError("unknown topology preset '" + cfg.topology_preset + "'");
    return *preset;
}

SwitchId resolve_switch_selector(const Topology& topo, const std::string& selector) {
    const auto colon = selector.find(':');
    if (colon == std::string::npos) {
        // raw switch id
        try {
            const int id = std::stoi(selector);
            if (id < 0 || id >= topo.switch_count()) throw std::out_of_range("id");
            return static_cast<SwitchId>(id);
        } catch (const std::exception&) {
            throw WorldConfigError("bad switch selector '" + selector + "'");
        }
    }

    const std::string tier_text = selector.substr(0, colon);
    SwitchTier tier;
    if (tier_text == "edge") tier = SwitchTier::Edge;
    else if (tier_text == "aggregate" || tier_text == "agg") tier = SwitchTier::Aggregate;
    else if (tier_text == "core") tier = SwitchTier::Core;
    else throw WorldConfigError("bad tier in selector '" + selector + "'");

    int index;
    try {
        index = std::stoi(selector.substr(colon + 1));
    } catch (const std::exception&) {
        throw WorldConfigError("bad index in selector '" + selector + "'");
    }

    int seen = 0;
    for (SwitchId sw = 0; sw < topo.switch_count(); ++sw) {
        if (topo.tier(sw) != tier) continue;
        if (seen == index) return sw;
        ++seen;
    }
    throw WorldConfigError("selector '" + selector + "' exceeds tier population");
}

std::vector<SwitchId> resolve_compromised(const SimConfig& cfg, const Topology& topo) {
    std::vector<SwitchId> ids;
    for (const auto& selector : cfg.compromised_selectors)
        ids.push_back(resolve_switch_selector(topo, selector));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

World::World(const SimConfig& cfg, std::uint64_t sample_seed)
    : rng(sample_seed),
      topo(build_topology(cfg)),
      paths(topo, cfg.path_policy),
      beliefs(topo.switch_count(), cfg.beta, cfg.prism_counter_init),
      detectors(cfg.detector) {
    if (cfg.roles < 1) throw WorldConfigError("need at least one role");
    const auto edges = topo.edge_switches();
    if (edges.empty()) throw WorldConfigError("topology has no edge switches");

    roles.resize(static_cast<std::size_t>(cfg.roles));
    for (int r = 0; r < cfg.roles; ++r) {
        roles[static_cast<std::size_t>(r)].role = r;
        roles[static_cast<std::size_t>(r)].honey_factor = cfg.honey_factor;
        roles[static_cast<std::size_t>(r)].credential_stub = "cred-role" + std::to_string(r);
    }

    // Real client hosts round-robin across roles; placement uniform over
    // edge switches.
    for (int i = 0; i < cfg.real_hosts; ++i) {
        Host host;
        host.ip = hosts.fresh_sequential_ip();
        host.mac = hosts.fresh_sequential_mac();
        host.kind = HostKind::Real;
        host.role = i % cfg.roles;
        host.edge = edges[rng.index(edges.size())];
        const HostId id = hosts.add(host);
        hosts.register_member(id);
        topo.attach_host(id, host.edge);
        roles[static_cast<std::size_t>(i % cfg.roles)].real_members.push_back(id);
    }

    // Servers are real hosts with reserved role bindings; they never appear
    // in the member sets that source connections.
    for (int s = 0; s < cfg.servers; ++s) {
        Host host;
        host.ip = hosts.fresh_sequential_ip();
        host.mac = hosts.fresh_sequential_mac();
        host.kind = HostKind::Real;
        host.role = s % cfg.roles;
        host.edge = edges[rng.index(edges.size())];
        const HostId id = hosts.add(host);
        topo.attach_host(id, host.edge);
        roles[static_cast<std::size_t>(s % cfg.roles)].servers.push_back(id);
    }

    for (auto& profile : roles) {
        if (profile.servers.empty()) throw WorldConfigError("role without servers");
        instantiate_honey_hosts(profile, topo, hosts, rng);
        for (HostId id : profile.honey_members) topo.attach_host(id, hosts.host(id).edge);
    }

    adversary_cfg.compromised = resolve_compromised(cfg, topo);
    adversary_cfg.target_role = cfg.target_role;
    adversary_cfg.confidence_init = cfg.confidence_init;
    adversary_cfg.confidence_cap = cfg.confidence_cap;
    adversary_cfg.increase_weight = cfg.increase_weight;
    if (cfg.target_role < 0 || cfg.target_role >= cfg.roles)
        throw WorldConfigError("target role out of range");

    adversary.confidence = cfg.confidence_init;
}

RoundResult run_round(World& world, const SimConfig& cfg, int round_index) {
    RoundResult result;
    result.round = round_index;
    result.confidence = world.adversary.confidence;

    for (int i = 0; i < cfg.round_length; ++i) {
        Connection conn =
            generate_connection(world.roles, world.hosts, world.paths, cfg.honey_ratio, world.rng,
                                round_index, world.next_connection_id++);

        const AttackDecision decision = observe(world.adversary, world.adversary_cfg, conn, world.rng);
        if (decision == AttackDecision::Attack) {
            conn.outcome.kind = OutcomeKind::Attacked;
            conn.outcome.attack =
                world.rng.bernoulli(0.5) ? AttackKind::SslStrip : AttackKind::Blackhole;
            ++result.attacks;
        }

        const ResponseObservation obs = simulate_outcome(conn, world.detectors.config(), world.rng);
        if (conn.outcome.kind != OutcomeKind::Attacked && !obs.responded)
            conn.outcome.kind = OutcomeKind::BenignDrop;

        if (conn.kind == HostKind::Honey) {
            ++result.honey_connections;
            result.honey_path_switch_sum += static_cast<long long>(conn.path.switch_sequence.size());
            const std::optional<Alert> alert = world.detectors.detect(conn, obs);
            if (alert) {
                ++result.alarms;
                result.alerted_path_switch_sum +=
                    static_cast<long long>(conn.path.switch_sequence.size());
            }
            world.beliefs.record(conn, alert.has_value());
        } else {
            ++result.real_connections;
        }

        if (cfg.record_connections) result.connections.push_back(std::move(conn));
    }

    // Snapshot interval counters before the reset, then close the interval.
    result.switches.resize(static_cast<std::size_t>(world.beliefs.switch_count()));
    for (SwitchId sw = 0; sw < world.beliefs.switch_count(); ++sw) {
        result.switches[static_cast<std::size_t>(sw)].a = world.beliefs.belief(sw).a;
        result.switches[static_cast<std::size_t>(sw)].c = world.beliefs.belief(sw).c;
    }
    end_of_round(world.adversary, world.adversary_cfg, world.rng);
    result.ranking = world.beliefs.end_of_interval();
    for (SwitchId sw = 0; sw < world.beliefs.switch_count(); ++sw) {
        result.switches[static_cast<std::size_t>(sw)].r = world.beliefs.belief(sw).r;
        result.switches[static_cast<std::size_t>(sw)].R = world.beliefs.belief(sw).R;
    }
    return result;
}

std::vector<RoundResult> run_experiment(const SimConfig& cfg, std::uint64_t sample_seed) {
    World world(cfg, sample_seed);
    std::vector<RoundResult> rounds;
    rounds.reserve(static_cast<std::size_t>(cfg.rounds));
    for (int round = 1; round <= cfg.rounds; ++round) rounds.push_back(run_round(world, cfg, round));
    return rounds;
}

namespace {

void aggregate(ExperimentResult& result, int switch_count, int rounds) {
    const auto n_samples = result.samples.size();
    result.mean_R.assign(static_cast<std::size_t>(rounds),
                         std::vector<double>(static_cast<std::size_t>(switch_count), 0.0));
    result.mean_rank.assign(static_cast<std::size_t>(rounds),
                            std::vector<double>(static_cast<std::size_t>(switch_count), 0.0));
    result.rank_of_mean.assign(static_cast<std::size_t>(rounds),
                               std::vector<int>(static_cast<std::size_t>(switch_count), 0));

    for (int round = 0; round < rounds; ++round) {
        auto& mean_R = result.mean_R[static_cast<std::size_t>(round)];
        auto& mean_rank = result.mean_rank[static_cast<std::size_t>(round)];
        for (const auto& sample : result.samples) {
            const RoundResult& rr = sample[static_cast<std::size_t>(round)];
            std::vector<int> position(static_cast<std::size_t>(switch_count), 0);
            for (std::size_t i = 0; i < rr.ranking.entries.size(); ++i)
                position[static_cast<std::size_t>(rr.ranking.entries[i].first)] =
                    static_cast<int>(i) + 1;
            for (int sw = 0; sw < switch_count; ++sw) {
                mean_R[static_cast<std::size_t>(sw)] +=
                    rr.switches[static_cast<std::size_t>(sw)].R;
                mean_rank[static_cast<std::size_t>(sw)] += position[static_cast<std::size_t>(sw)];
            }
        }
        for (int sw = 0; sw < switch_count; ++sw) {
            mean_R[static_cast<std::size_t>(sw)] /= static_cast<double>(n_samples);
            mean_rank[static_cast<std::size_t>(sw)] /= static_cast<double>(n_samples);
        }

        // Rank switches by mean smoothed risk, ties by ascending id.
        std::vector<SwitchId> order(static_cast<std::size_t>(switch_count));
        for (int sw = 0; sw < switch_count; ++sw) order[static_cast<std::size_t>(sw)] = sw;
        std::sort(order.begin(), order.end(), [&](SwitchId a, SwitchId b) {
            const double ra = mean_R[static_cast<std::size_t>(a)];
            const double rb = mean_R[static_cast<std::size_t>(b)];
            if (ra != rb) return ra > rb;
            return a < b;
        });
        for (std::size_t i = 0; i < order.size(); ++i)
            result.rank_of_mean[static_cast<std::size_t>(round)]
                               [static_cast<std::size_t>(order[i])] = static_cast<int>(i) + 1;
    }

    const int first_counted = std::min(kWarmupRounds, rounds);
    const int counted = rounds - first_counted;
    for (SwitchId sw : result.compromised) {
        CompromisedSwitchStats stats;
        stats.sw = sw;
        stats.mean_rank_per_round.reserve(static_cast<std::size_t>(rounds));
        int top1 = 0, top2 = 0, top5 = 0;
        for (int round = 0; round < rounds; ++round) {
            stats.mean_rank_per_round.push_back(
                result.mean_rank[static_cast<std::size_t>(round)][static_cast<std::size_t>(sw)]);
            if (round >= first_counted) {
                const int rank =
                    result.rank_of_mean[static_cast<std::size_t>(round)][static_cast<std::size_t>(sw)];
                if (rank <= 1) ++top1;
                if (rank <= 2) ++top2;
                if (rank <= 5) ++top5;
            }
        }
        if (counted > 0) {
            stats.frac_top1 = static_cast<double>(top1) / counted;
            stats.frac_top2 = static_cast<double>(top2) / counted;
            stats.frac_top5 = static_cast<double>(top5) / counted;
        }
        result.compromised_stats.push_back(std::move(stats));
    }

    const auto latency = [&](int k) {
        for (int round = 0; round < rounds; ++round) {
            bool all_in = !result.compromised.empty();
            for (SwitchId sw : result.compromised)
                if (result.rank_of_mean[static_cast<std::size_t>(round)]
                                       [static_cast<std::size_t>(sw)] > k)
                    all_in = false;
            if (all_in) return round + 1;
        }
        return -1;
    };
    result.detection_latency_top1 = latency(1);
    result.detection_latency_top2 = latency(2);
    result.detection_latency_top5 = latency(5);
}

}  // namespace

ExperimentResult monte_carlo(const SimConfig& cfg, bool parallel) {
    if (cfg.samples < 1) throw WorldConfigError("samples must be >= 1");

    ExperimentResult result;
    {
        const Topology topo = build_topology(cfg);
        result.tiers.reserve(static_cast<std::size_t>(topo.switch_count()));
        for (SwitchId sw = 0; sw < topo.switch_count(); ++sw) result.tiers.push_back(topo.tier(sw));
        result.compromised = resolve_compromised(cfg, topo);
    }

    result.samples.resize(static_cast<std::size_t>(cfg.samples));
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int i = 0; i < cfg.samples; ++i)
            result.samples[static_cast<std::size_t>(i)] =
                run_experiment(cfg, derive_sample_seed(cfg.master_seed, static_cast<std::uint64_t>(i)));
    } else {
        // serial reference path, kept for testing and benchmarking
        for (int i = 0; i < cfg.samples; ++i)
            result.samples[static_cast<std::size_t>(i)] =
                run_experiment(cfg, derive_sample_seed(cfg.master_seed, static_cast<std::uint64_t>(i)));
    }

    aggregate(result, static_cast<int>(result.tiers.size()), cfg.rounds);
    return result;
}

}  // namespace honeyroles
