#include "honeyroles/report.hpp"

#include <charconv>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace honeyroles {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void write_rankings_csv(std::ostream& out, const ExperimentResult& result) {
    out << "sample,round,switch_id,tier,a,c,r,R,rank,compromised\n";
    const int switch_count = static_cast<int>(result.tiers.size());
    std::vector<int> is_compromised(static_cast<std::size_t>(switch_count), 0);
    for (SwitchId sw : result.compromised) is_compromised[static_cast<std::size_t>(sw)] = 1;

    std::vector<int> position(static_cast<std::size_t>(switch_count), 0);
    for (std::size_t sample = 0; sample < result.samples.size(); ++sample) {
        for (const RoundResult& round : result.samples[sample]) {
            for (std::size_t i = 0; i < round.ranking.entries.size(); ++i)
                position[static_cast<std::size_t>(round.ranking.entries[i].first)] =
                    static_cast<int>(i) + 1;
            for (int sw = 0; sw < switch_count; ++sw) {
                const auto& stat = round.switches[static_cast<std::size_t>(sw)];
                out << sample << ',' << round.round << ',' << sw << ','
                    << tier_name(result.tiers[static_cast<std::size_t>(sw)]) << ',' << stat.a << ','
                    << stat.c << ',' << format_double(stat.r) << ',' << format_double(stat.R) << ','
                    << position[static_cast<std::size_t>(sw)] << ','
                    << is_compromised[static_cast<std::size_t>(sw)] << '\n';
            }
        }
    }
}

namespace {

void digest_mix(std::uint64_t& hash, const std::string& text) {
    for (const char c : text) {
        hash ^= static_cast<std::uint8_t>(c);
        hash *= 0x100000001b3ULL;
    }
}

const char* mode_name(PathMode mode) {
    switch (mode) {
        case PathMode::DisjointOnly: return "disjoint";
        case PathMode::DisjointPlusNonOptimal: return "disjoint-plus-nonoptimal";
        case PathMode::OverlapTolerant: return "overlap-tolerant";
    }
    return "?";
}

}  // namespace

std::string config_digest(const SimConfig& cfg) {
    std::ostringstream canon;
    canon << "roles=" << cfg.roles << ";rounds=" << cfg.rounds << ";round_length="
          << cfg.round_length << ";topology=" << (cfg.gml_text ? "gml" : cfg.topology_preset)
          << ";real=" << cfg.real_hosts << ";honey_factor=" << format_double(cfg.honey_factor)
          << ";servers=" << cfg.servers << ";honey_ratio=" << format_double(cfg.honey_ratio)
          << ";mode=" << mode_name(cfg.path_policy.mode)
          << ";max_extra_hops=" << cfg.path_policy.max_extra_hops
          << ";max_overlap=" << format_double(cfg.path_policy.max_overlap_fraction)
          << ";compromised=";
    for (const auto& sel : cfg.compromised_selectors) canon << sel << '+';
    canon << ";target_role=" << cfg.target_role << ";confidence_init=" << cfg.confidence_init
          << ";confidence_cap=" << cfg.confidence_cap
          << ";increase_weight=" << format_double(cfg.increase_weight)
          << ";timeout=" << format_double(cfg.detector.estimated_timeout)
          << ";delta=" << format_double(cfg.detector.timeout_increment)
          << ";noise=" << format_double(cfg.detector.benign_drop_probability)
          << ";adaptive=" << cfg.detector.adaptive_timeout << ";beta=" << format_double(cfg.beta)
          << ";prism_counter_init=" << cfg.prism_counter_init << ";samples=" << cfg.samples
          << ";master_seed=" << cfg.master_seed;
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    digest_mix(hash, canon.str());
    if (cfg.gml_text) digest_mix(hash, *cfg.gml_text);

    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << hash;
    return hex.str();
}

void write_summary(std::ostream& out, const ExperimentResult& result, const SimConfig& cfg) {
    out << "beta = " << format_double(cfg.beta) << "\n";
    out << "config = " << config_digest(cfg) << "\n";
    out << "switches = " << result.tiers.size() << ", samples = " << result.samples.size()
        << ", rounds = " << cfg.rounds << ", warmup = " << kWarmupRounds << "\n";
    if (cfg.risk_threshold)
        out << "risk threshold = " << format_double(*cfg.risk_threshold) << "\n";
    out << "\n";

    if (result.compromised.empty()) {
        out << "no compromised switches configured\n";
    }
    for (const auto& stats : result.compromised_stats) {
        double mean_after_warmup = 0;
        int counted = 0;
        for (std::size_t round = kWarmupRounds; round < stats.mean_rank_per_round.size(); ++round) {
            mean_after_warmup += stats.mean_rank_per_round[round];
            ++counted;
        }
        if (counted > 0) mean_after_warmup /= counted;
        out << "compromised switch " << stats.sw << " ("
            << tier_name(result.tiers[static_cast<std::size_t>(stats.sw)]) << ")\n";
        out << "  mean rank after warmup = " << format_double(mean_after_warmup) << "\n";
        out << "  rank <= 1 in " << format_double(100.0 * stats.frac_top1) << "% of rounds\n";
        out << "  rank <= 2 in " << format_double(100.0 * stats.frac_top2) << "% of rounds\n";
        out << "  rank <= 5 in " << format_double(100.0 * stats.frac_top5) << "% of rounds\n";
    }
    if (!result.compromised.empty()) {
        const auto latency = [&](int value) {
            return value < 0 ? std::string("never") : "round " + std::to_string(value);
        };
        out << "detection latency (set in top-1) = " << latency(result.detection_latency_top1)
            << "\n";
        out << "detection latency (set in top-2) = " << latency(result.detection_latency_top2)
            << "\n";
        out << "detection latency (set in top-5) = " << latency(result.detection_latency_top5)
            << "\n";
    }

    if (cfg.risk_threshold && !result.mean_R.empty()) {
        out << "switches above threshold in final round:";
        const auto& final_R = result.mean_R.back();
        bool any = false;
        for (std::size_t sw = 0; sw < final_R.size(); ++sw) {
            if (final_R[sw] > *cfg.risk_threshold) {
                out << " " << sw;
                any = true;
            }
        }
        if (!any) out << " none";
        out << "\n";
    }

    out << "\nmean rank per round";
    for (const auto& stats : result.compromised_stats) out << "  sw" << stats.sw;
    out << "\n";
    for (std::size_t round = 0; round < result.mean_rank.size(); ++round) {
        out << (round + 1);
        for (const auto& stats : result.compromised_stats)
            out << "  " << format_double(stats.mean_rank_per_round[round]);
        out << "\n";
    }
}

}  // namespace honeyroles
