#include "honeyroles/bms.hpp"

#include <algorithm>

namespace honeyroles {

int Ranking::position(SwitchId sw) const {
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].first == sw) return static_cast<int>(i) + 1;
    return -1;
}

BeliefTable::BeliefTable(int switch_count, double beta, bool prism_counter_init)
    : beliefs_(static_cast<std::size_t>(switch_count)),
      beta_(beta),
      prism_counter_init_(prism_counter_init) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("BeliefTable: beta must lie strictly between 0 and 1");
    if (prism_counter_init_)
        for (auto& belief : beliefs_) belief.a = belief.c = 1;
}

void BeliefTable::record(const Connection& conn, bool alerted) {
    if (conn.kind != HostKind::Honey)
        throw std::invalid_argument("BeliefTable::record: honey connections only");
    for (SwitchId sw : conn.path.switch_sequence) {
        if (sw < 0 || sw >= switch_count())
            throw std::out_of_range("BeliefTable::record: unknown switch id");
        SwitchBelief& belief = beliefs_[static_cast<std::size_t>(sw)];
        belief.c += 1;
        if (alerted) belief.a += 1;
    }
}

Ranking BeliefTable::end_of_interval() {
    for (auto& belief : beliefs_) {
        belief.r = belief.c > 0 ? static_cast<double>(belief.a) / static_cast<double>(belief.c) : 0.0;
        belief.R = interval_ == 0 ? belief.r : beta_ * belief.r + (1.0 - beta_) * belief.R;
        const int reset = prism_counter_init_ ? 1 : 0;
        belief.a = reset;
        belief.c = reset;
    }
    ++interval_;
    return rank();
}

Ranking BeliefTable::rank() const {
    Ranking ranking;
    ranking.entries.reserve(beliefs_.size());
    for (std::size_t i = 0; i < beliefs_.size(); ++i)
        ranking.entries.emplace_back(static_cast<SwitchId>(i), beliefs_[i].R);
    std::sort(ranking.entries.begin(), ranking.entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return ranking;
}

}  // namespace honeyroles
