#include "honeyroles/detection.hpp"

#include "honeyroles/enterprise.hpp"

namespace honeyroles {

ResponseObservation simulate_outcome(const Connection& conn, const DetectorConfig& cfg, Rng& rng) {
    ResponseObservation obs;
    switch (conn.outcome.kind) {
        case OutcomeKind::Attacked:
            if (conn.outcome.attack == AttackKind::SslStrip) {
                obs.responded = true;
                obs.redirect_honored = false;
                obs.response_time = 0.5 * cfg.estimated_timeout * rng.next_unit();
            }
            // blackhole: never answers
            break;
        case OutcomeKind::BenignDrop:
            break;
        case OutcomeKind::Delivered:
            // congestion can still time the response out; it never forges a
            // missing redirect
            if (cfg.benign_drop_probability > 0 && rng.bernoulli(cfg.benign_drop_probability)) break;
            obs.responded = true;
            obs.redirect_honored = true;
            obs.response_time = 0.5 * cfg.estimated_timeout * rng.next_unit();
            break;
    }
    return obs;
}

double DetectorBank::working_timeout(HostId agent) const {
    const auto it = timeouts_.find(agent);
    return it == timeouts_.end() ? cfg_.estimated_timeout : it->second;
}

std::optional<Alert> DetectorBank::detect(const Connection& conn, const ResponseObservation& obs) {
    if (conn.kind != HostKind::Honey)
        throw std::invalid_argument("detect: only honey connections run detectors");

    const double timeout = working_timeout(conn.source);

    if (obs.responded && !obs.redirect_honored) {
        Alert alert{AttackKind::SslStrip, conn.id, obs.response_time, 0};
        return alert;
    }
    if (!obs.responded || obs.response_time > timeout) {
        Alert alert{AttackKind::Blackhole, conn.id, timeout, 1};
        if (cfg_.adaptive_timeout) timeouts_[conn.source] = timeout + cfg_.timeout_increment;
        return alert;
    }
    return std::nullopt;
}

}  // namespace honeyroles
