// Batch front-end: load a configuration, run experiments (optionally over a
// beta sweep), and write rankings.csv / summary.txt / model.prism.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace honeyroles {

struct CliOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;      // overrides the config file
    std::optional<int> samples;             // overrides the config file
    std::vector<double> betas;              // sweep; empty = config beta
    std::optional<std::string> export_prism;
    bool quiet = false;
    int jobs = 0;  // 0 = all cores, 1 = serial reference path
};

// Exit status: 0 success, 1 configuration error, 2 runtime error.
int run_cli(const CliOptions& options);

}  // namespace honeyroles
