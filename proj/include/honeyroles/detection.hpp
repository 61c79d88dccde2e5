// Honey-agent attack detection: maps adversary decisions to observable wire
// effects and classifies honey connection outcomes into alerts.

#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>

#include "honeyroles/rng.hpp"
#include "honeyroles/topology.hpp"

namespace honeyroles {

struct Connection;  // enterprise.hpp

enum class AttackKind : std::uint8_t { SslStrip = 1, Blackhole = 2 };

struct Alert {
    AttackKind kind;
    std::uint32_t connection;  // Connection::id
    double average_delay = 0.0;  // seconds
    std::uint32_t dropped_requests = 0;
};

struct DetectorConfig {
    double estimated_timeout = 5.0;      // seconds
    double timeout_increment = 1.0;      // added after each blackhole alert
    double benign_drop_probability = 0.0;
    bool adaptive_timeout = true;
};

struct ResponseObservation {
    bool responded = false;
    double response_time = 0.0;  // meaningful only when responded
    bool redirect_honored = false;
};

// What the requesting agent sees on the wire for this connection. An
// SSL-strip attack answers without the expected redirect; a blackhole never
// answers; an unattacked connection answers normally except for a benign
// congestion timeout drawn with benign_drop_probability.
ResponseObservation simulate_outcome(const Connection& conn, const DetectorConfig& cfg, Rng& rng);

// Per-honey-agent detector state. The working timeout starts at
// estimated_timeout and grows by timeout_increment after every blackhole
// alert (monotone within a run) when adaptive_timeout is set.
class DetectorBank {
public:
    explicit DetectorBank(DetectorConfig cfg) : cfg_(cfg) {}

    std::optional<Alert> detect(const Connection& conn, const ResponseObservation& obs);

    double working_timeout(HostId agent) const;
    const DetectorConfig& config() const { return cfg_; }

private:
    DetectorConfig cfg_;
    std::unordered_map<HostId, double> timeouts_;
};

}  // namespace honeyroles
