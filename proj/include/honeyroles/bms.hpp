// Belief Maintenance System: attributes honey alarms to forwarding-path
// switches, smooths per-switch risk with an exponential moving average, and
// ranks switches by suspiciousness.

#pragma once

#include <utility>
#include <vector>

#include "honeyroles/enterprise.hpp"
#include "honeyroles/topology.hpp"

namespace honeyroles {

struct SwitchBelief {
    int a = 0;       // alarms this interval
    int c = 0;       // honey connections this interval
    double r = 0.0;  // interval risk a/c
    double R = 0.0;  // smoothed risk
};

// Descending by smoothed risk, ties broken by ascending switch id.
struct Ranking {
    std::vector<std::pair<SwitchId, double>> entries;

    // 1-based position of a switch in the ranked list.
    int position(SwitchId sw) const;
};

class BeliefTable {
public:
    // prism_counter_init reproduces the generated model's counter handling:
    // a and c start each interval at 1 instead of 0, which makes an idle
    // switch's interval risk equal 1.
    BeliefTable(int switch_count, double beta, bool prism_counter_init = false);

    // Honey connections only: every switch on the path forwarded the
    // connection, and every one of them is charged when it raised an alarm.
    void record(const Connection& conn, bool alerted);

    // Closes the interval: r = a/c (0 when c is 0 under the default rule),
    // R = r on the first interval and beta*r + (1-beta)*R_prev afterwards,
    // counters reset, interval index advanced.
    Ranking end_of_interval();

    Ranking rank() const;

    const SwitchBelief& belief(SwitchId sw) const {
        return beliefs_.at(static_cast<std::size_t>(sw));
    }
    int interval_index() const { return interval_; }
    double beta() const { return beta_; }
    int switch_count() const { return static_cast<int>(beliefs_.size()); }

private:
    std::vector<SwitchBelief> beliefs_;
    double beta_;
    int interval_ = 0;
    bool prism_counter_init_;
};

}  // namespace honeyroles
