#include "honeyroles/adversary.hpp"

#include <algorithm>

namespace honeyroles {

namespace {

bool path_compromised(const ForwardingPath& path, const std::vector<SwitchId>& compromised) {
    for (SwitchId sw : compromised)
        if (path.contains(sw)) return true;
    return false;
}

}  // namespace

AttackDecision observe(AdversaryState& state, const AdversaryConfig& cfg, const Connection& conn,
                       Rng& rng) {
    if (cfg.compromised.empty() || !path_compromised(conn.path, cfg.compromised))
        return AttackDecision::NoVisibility;
    if (conn.role != cfg.target_role) return AttackDecision::NoVisibility;

    ++state.observations_this_round;

    // Classification is correct with probability confidence/100. The attack
    // fires exactly when the adversary concludes the connection is real.
    const double confidence = static_cast<double>(state.confidence) / 100.0;
    const bool belief_correct = rng.bernoulli(confidence);
    const bool believed_real =
        (conn.kind == HostKind::Real) == belief_correct;

    if (!believed_real) return AttackDecision::Ignore;
    ++state.attacks_this_round;
    return AttackDecision::Attack;
}

void end_of_round(AdversaryState& state, const AdversaryConfig& cfg, Rng& rng) {
    if (state.confidence < cfg.confidence_cap) {
        state.confidence += rng.bernoulli(cfg.increase_weight) ? 1 : -1;
    } else {
        if (rng.bernoulli(0.5)) state.confidence -= 1;
    }
    state.confidence = std::max(state.confidence, 0);
    state.attacks_this_round = 0;
    state.observations_this_round = 0;
}

}  // namespace honeyroles
