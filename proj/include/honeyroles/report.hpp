// Ranking CSV and summary emission for experiment results.

#pragma once

#include <iosfwd>
#include <string>

#include "honeyroles/engine.hpp"

namespace honeyroles {

// Shortest round-trip decimal form, deterministic across runs.
std::string format_double(double x);

// One row per (sample, round, switch), ordered exactly that way:
// sample,round,switch_id,tier,a,c,r,R,rank,compromised
void write_rankings_csv(std::ostream& out, const ExperimentResult& result);

// FNV-1a over the canonical key=value rendering of the configuration.
std::string config_digest(const SimConfig& cfg);

void write_summary(std::ostream& out, const ExperimentResult& result, const SimConfig& cfg);

}  // namespace honeyroles
