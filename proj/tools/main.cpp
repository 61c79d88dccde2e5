#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "honeyroles/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"honeyroles: role-based network deception simulator"};

    honeyroles::CliOptions options;
    std::string beta_list;
    std::uint64_t seed = 0;
    int samples = 0;
    std::string export_prism;

    app.add_option("--config", options.config_path, "configuration file (required)")->required();
    app.add_option("--out-dir", options.out_dir, "output directory (default: current)");
    auto* seed_opt = app.add_option("--seed", seed, "master seed, overrides the config file");
    auto* samples_opt = app.add_option("--samples", samples, "sample count, overrides the config file");
    app.add_option("--beta", beta_list,
                   "smoothing factor, or a comma-separated list to sweep (e.g. 0.1,0.2,0.3)");
    auto* prism_opt =
        app.add_option("--export-prism", export_prism, "write the generated PRISM model to this path");
    app.add_flag("--quiet", options.quiet, "suppress progress output");
    app.add_option("--jobs", options.jobs, "worker threads for samples (1 = serial, 0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (*seed_opt) options.seed = seed;
    if (*samples_opt) options.samples = samples;
    if (*prism_opt) options.export_prism = export_prism;

    if (!beta_list.empty()) {
        std::size_t start = 0;
        while (start <= beta_list.size()) {
            const std::size_t comma = beta_list.find(',', start);
            const std::string piece =
                beta_list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            char* end = nullptr;
            const double beta = std::strtod(piece.c_str(), &end);
            if (piece.empty() || !end || *end != '\0') {
                std::cerr << "--beta: cannot parse '" << piece << "'\n";
                return 1;
            }
            options.betas.push_back(beta);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }

    return honeyroles::run_cli(options);
}
