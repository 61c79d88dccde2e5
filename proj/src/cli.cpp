#include "honeyroles/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "honeyroles/config.hpp"
#include "honeyroles/prism_export.hpp"
#include "honeyroles/report.hpp"

namespace honeyroles {

namespace {

std::string beta_suffix(double beta) {
    std::string s = format_double(beta);
    for (char& c : s)
        if (c == '.') c = 'p';
    return s;
}

}  // namespace

int run_cli(const CliOptions& options) {
    ConfigResult loaded = load_config_file(options.config_path);
    if (!loaded.ok()) {
        for (const auto& diag : loaded.diagnostics)
            std::cerr << options.config_path << ":" << diag.str() << "\n";
        return 1;
    }
    SimConfig cfg = *loaded.config;
    if (options.seed) cfg.master_seed = *options.seed;
    if (options.samples) {
        if (*options.samples < 1) {
            std::cerr << "--samples must be positive\n";
            return 1;
        }
        cfg.samples = *options.samples;
    }
    for (double beta : options.betas) {
        if (!(beta > 0 && beta < 1)) {
            std::cerr << "--beta values must lie strictly between 0 and 1\n";
            return 1;
        }
    }

    try {
        std::filesystem::create_directories(options.out_dir);

#ifdef _OPENMP
        if (options.jobs > 0) omp_set_num_threads(options.jobs);
#endif
        const bool parallel = options.jobs != 1;

        const std::vector<double> betas =
            options.betas.empty() ? std::vector<double>{cfg.beta} : options.betas;
        const bool sweep = betas.size() > 1;

        std::ofstream summary(options.out_dir + "/summary.txt");
        if (!summary) throw std::runtime_error("cannot write " + options.out_dir + "/summary.txt");

        for (std::size_t i = 0; i < betas.size(); ++i) {
            SimConfig run_cfg = cfg;
            run_cfg.beta = betas[i];

            const ExperimentResult result = monte_carlo(run_cfg, parallel);

            const std::string csv_name =
                sweep ? "rankings_beta" + beta_suffix(betas[i]) + ".csv" : "rankings.csv";
            std::ofstream csv(options.out_dir + "/" + csv_name, std::ios::binary);
            if (!csv) throw std::runtime_error("cannot write " + csv_name);
            write_rankings_csv(csv, result);

            if (i) summary << "\n----------------------------------------\n\n";
            write_summary(summary, result, run_cfg);

            if (!options.quiet) {
                std::cout << "beta=" << format_double(betas[i]) << ": wrote " << csv_name;
                if (!result.compromised.empty())
                    std::cout << " (top-2 latency: "
                              << (result.detection_latency_top2 < 0
                                      ? std::string("never")
                                      : "round " + std::to_string(result.detection_latency_top2))
                              << ")";
                std::cout << "\n";
            }
        }

        if (options.export_prism) {
            SimConfig export_cfg = cfg;
            export_cfg.beta = betas.front();
            const Topology topo = build_topology(export_cfg);
            const PathTable table = enumerate_path_table(topo, export_cfg.path_policy);
            const PrismModel model = emit_model(export_cfg, topo, table);
            const auto violations = check_model(model);
            std::ofstream prism(*options.export_prism, std::ios::binary);
            if (!prism) throw std::runtime_error("cannot write " + *options.export_prism);
            prism << model.text;
            if (!violations.empty()) {
                std::cerr << "emitted model failed its structural self-check:\n";
                for (const auto& v : violations)
                    std::cerr << "  line " << v.line << ": " << v.message << "\n";
                return 2;
            }
            if (!options.quiet)
                std::cout << "wrote " << *options.export_prism << " (" << model.command_count
                          << " commands)\n";
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace honeyroles
