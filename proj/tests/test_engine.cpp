#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "honeyroles/engine.hpp"
#include "honeyroles/report.hpp"

using namespace honeyroles;

namespace {

SimConfig small_config() {
    SimConfig cfg;
    cfg.rounds = 20;
    cfg.samples = 5;
    cfg.compromised_selectors = {"edge:0"};
    cfg.path_policy = PathPolicy{PathMode::OverlapTolerant, 0, 1.0};
    return cfg;
}

}  // namespace

TEST_CASE("selector resolution on the paper-14 id map") {
    const Topology topo = paper14_preset();
    CHECK(resolve_switch_selector(topo, "edge:0") == 0);
    CHECK(resolve_switch_selector(topo, "edge:7") == 7);
    CHECK(resolve_switch_selector(topo, "aggregate:0") == 8);
    CHECK(resolve_switch_selector(topo, "agg:3") == 11);
    CHECK(resolve_switch_selector(topo, "core:1") == 13);
    CHECK(resolve_switch_selector(topo, "9") == 9);
    CHECK_THROWS_AS(resolve_switch_selector(topo, "edge:8"), WorldConfigError);
    CHECK_THROWS_AS(resolve_switch_selector(topo, "spine:0"), WorldConfigError);
    CHECK_THROWS_AS(resolve_switch_selector(topo, "core:x"), WorldConfigError);
    CHECK_THROWS_AS(resolve_switch_selector(topo, "99"), WorldConfigError);
}

TEST_CASE("world setup: table-2 style counts") {
    const SimConfig cfg = small_config();
    World world(cfg, derive_sample_seed(cfg.master_seed, 0));
    // 50 real + 6 servers + 50 honey
    CHECK(world.hosts.count() == 106);
    int honey = 0;
    for (HostId id = 0; id < world.hosts.count(); ++id)
        if (world.hosts.host(id).kind == HostKind::Honey) ++honey;
    CHECK(honey == 50);
    for (const auto& profile : world.roles) {
        CHECK(profile.servers.size() == 2);
        CHECK(profile.honey_members.size() == profile.real_members.size());
    }
    CHECK(world.adversary.confidence == cfg.confidence_init);
    CHECK(world.adversary_cfg.compromised == std::vector<SwitchId>{0});
}

TEST_CASE("run_round: exactly round_length connections, all consistent") {
    SimConfig cfg = small_config();
    cfg.record_connections = true;
    World world(cfg, 7);
    const RoundResult result = run_round(world, cfg, 1);
    CHECK(result.connections.size() == 100);
    CHECK(result.honey_connections + result.real_connections == 100);
    CHECK(result.alarms <= result.honey_connections);
    long long honey_path_sum = 0;
    for (const Connection& conn : result.connections) {
        CHECK(conn.round == 1);
        if (conn.kind == HostKind::Honey)
            honey_path_sum += static_cast<long long>(conn.path.switch_sequence.size());
    }
    CHECK(honey_path_sum == result.honey_path_switch_sum);
}

TEST_CASE("null world: no adversary, no noise, nothing ever fires") {
    SimConfig cfg = small_config();
    cfg.compromised_selectors.clear();
    cfg.samples = 3;
    const ExperimentResult result = monte_carlo(cfg, false);
    for (const auto& sample : result.samples) {
        for (const RoundResult& round : sample) {
            CHECK(round.attacks == 0);
            CHECK(round.alarms == 0);
            for (const auto& stat : round.switches) {
                CHECK(stat.r == 0.0);
                CHECK(stat.R == 0.0);
            }
        }
    }
}

TEST_CASE("experiment: per-round belief counters reconcile with the engine's own sums") {
    SimConfig cfg = small_config();
    const auto rounds = run_experiment(cfg, derive_sample_seed(cfg.master_seed, 1));
    REQUIRE(rounds.size() == 20);
    for (const RoundResult& round : rounds) {
        long long total_a = 0, total_c = 0;
        for (const auto& stat : round.switches) {
            total_a += stat.a;
            total_c += stat.c;
        }
        CHECK(total_c == round.honey_path_switch_sum);
        CHECK(total_a == round.alerted_path_switch_sum);
    }
}

TEST_CASE("experiment: confidence trajectory is the adversary's bounded walk") {
    SimConfig cfg = small_config();
    cfg.rounds = 300;
    const auto rounds = run_experiment(cfg, 99);
    int previous = cfg.confidence_init;
    for (const RoundResult& round : rounds) {
        CHECK(round.confidence >= 0);
        CHECK(round.confidence <= cfg.confidence_cap);
        CHECK(std::abs(round.confidence - previous) <= 1);
        previous = round.confidence;
    }
}

TEST_CASE("experiment: deterministic for a fixed seed") {
    const SimConfig cfg = small_config();
    const ExperimentResult a = monte_carlo(cfg, false);
    const ExperimentResult b = monte_carlo(cfg, false);
    std::ostringstream csv_a, csv_b;
    write_rankings_csv(csv_a, a);
    write_rankings_csv(csv_b, b);
    CHECK(csv_a.str() == csv_b.str());

    // distinct sample seeds never collide in a realistic range
    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(derive_sample_seed(42, i));
    CHECK(seeds.size() == 1000);
}

TEST_CASE("stock run: volume, split, and early alarms") {
    SimConfig cfg;
    cfg.compromised_selectors = {"edge:0"};
    cfg.path_policy = PathPolicy{PathMode::OverlapTolerant, 0, 1.0};
    cfg.samples = 25;
    const ExperimentResult result = monte_carlo(cfg);

    long long honey = 0, total = 0;
    int samples_with_early_alarms = 0;
    for (const auto& sample : result.samples) {
        long long sample_total = 0;
        int early_alarms = 0;
        for (const RoundResult& round : sample) {
            honey += round.honey_connections;
            sample_total += round.honey_connections + round.real_connections;
            if (round.round <= 3) early_alarms += round.alarms;
        }
        CHECK(sample_total == 10000);  // 100 rounds x 100 connections
        total += sample_total;
        if (early_alarms > 0) ++samples_with_early_alarms;
    }
    // honey/real split within 2% of the configured ratio
    CHECK(std::abs(static_cast<double>(honey) / static_cast<double>(total) - 0.5) < 0.02);
    // the initially low-confidence adversary attacks honey flows eagerly, so
    // alarms appear within the first rounds in almost all samples
    CHECK(samples_with_early_alarms >= 23);
}

TEST_CASE("ema smoothing: step from a common state is monotone in beta") {
    SimConfig cfg = small_config();
    cfg.rounds = 40;
    const auto rounds = run_experiment(cfg, 5);
    const double betas[] = {0.1, 0.2, 0.3, 0.4, 0.5};
    // replay the recorded interval risks: from any common previous state the
    // update magnitude beta*|r - R| is ordered exactly like beta
    for (const RoundResult& round : rounds) {
        for (const auto& stat : round.switches) {
            const double r = stat.r;
            const double prev = stat.R;  // use the smoothed value as a state probe
            for (std::size_t i = 1; i < std::size(betas); ++i) {
                const double small_step = betas[i - 1] * std::abs(r - prev);
                const double big_step = betas[i] * std::abs(r - prev);
                CHECK(big_step >= small_step);
            }
        }
    }
}

TEST_CASE("aggregates: mean rank and rank-of-mean are consistent with samples") {
    SimConfig cfg = small_config();
    cfg.samples = 4;
    const ExperimentResult result = monte_carlo(cfg, false);
    REQUIRE(result.mean_R.size() == static_cast<std::size_t>(cfg.rounds));
    const int switches = static_cast<int>(result.tiers.size());
    for (int round = 0; round < cfg.rounds; ++round) {
        for (int sw = 0; sw < switches; ++sw) {
            double mean = 0;
            for (const auto& sample : result.samples)
                mean += sample[static_cast<std::size_t>(round)]
                            .switches[static_cast<std::size_t>(sw)]
                            .R;
            mean /= static_cast<double>(result.samples.size());
            CHECK(result.mean_R[static_cast<std::size_t>(round)][static_cast<std::size_t>(sw)] ==
                  doctest::Approx(mean).epsilon(1e-12));
        }
        // rank_of_mean is a permutation of 1..N consistent with mean_R order
        std::set<int> ranks;
        for (int sw = 0; sw < switches; ++sw)
            ranks.insert(result.rank_of_mean[static_cast<std::size_t>(round)]
                                            [static_cast<std::size_t>(sw)]);
        CHECK(ranks.size() == static_cast<std::size_t>(switches));
        CHECK(*ranks.begin() == 1);
        CHECK(*ranks.rbegin() == switches);
    }
    CHECK(result.compromised_stats.size() == 1);
    CHECK(result.compromised_stats[0].sw == 0);
}

TEST_CASE("gml topology end to end") {
    SimConfig cfg = small_config();
    cfg.gml_text = R"(graph [
      node [ id 0 ]
      node [ id 1 ]
      node [ id 2 tier "core" ]
      edge [ source 0 target 2 ]
      edge [ source 1 target 2 ]
    ])";
    cfg.real_hosts = 6;
    cfg.servers = 3;
    cfg.samples = 2;
    cfg.rounds = 5;
    cfg.compromised_selectors = {"core:0"};
    const ExperimentResult result = monte_carlo(cfg, false);
    CHECK(result.compromised == std::vector<SwitchId>{2});
    CHECK(result.tiers.size() == 3);
}

TEST_CASE("invalid configurations are rejected") {
    SimConfig bad = small_config();
    bad.target_role = 7;
    CHECK_THROWS_AS(World(bad, 1), WorldConfigError);

    SimConfig unknown = small_config();
    unknown.topology_preset = "mystery";
    CHECK_THROWS_AS(build_topology(unknown), WorldConfigError);

    SimConfig none = small_config();
    none.samples = 0;
    CHECK_THROWS_AS(monte_carlo(none), WorldConfigError);
}
