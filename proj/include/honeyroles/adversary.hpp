// Adversary embedded in compromised switches: observes transiting
// connections, probabilistically classifies them, attacks the ones it
// believes are real, and adjusts confidence at round boundaries.

#pragma once

#include <vector>

#include "honeyroles/enterprise.hpp"
#include "honeyroles/rng.hpp"
#include "honeyroles/topology.hpp"

namespace honeyroles {

struct AdversaryConfig {
    std::vector<SwitchId> compromised;  // empty set models the null experiment
    RoleId target_role = 0;
    int confidence_init = 10;   // percent
    int confidence_cap = 90;    // percent
    double increase_weight = 2.0 / 3.0;  // P(confidence+1) below the cap
};

struct AdversaryState {
    int confidence = 10;  // percent, in [0, confidence_cap]
    int attacks_this_round = 0;
    int observations_this_round = 0;
};

enum class AttackDecision { NoVisibility, Ignore, Attack };

// Per-connection decision. Connections that avoid every compromised switch
// or belong to a non-target role are invisible. Visible ones are classified
// correctly with probability confidence/100 and attacked when the adversary
// concludes they are real.
AttackDecision observe(AdversaryState& state, const AdversaryConfig& cfg, const Connection& conn,
                       Rng& rng);

// Round-boundary confidence walk: below the cap, +1 with increase_weight and
// -1 otherwise; at the cap, hold or -1 with equal probability. Decrements
// saturate at zero. Round counters reset.
void end_of_round(AdversaryState& state, const AdversaryConfig& cfg, Rng& rng);

}  // namespace honeyroles
