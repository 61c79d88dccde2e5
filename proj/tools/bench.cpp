// Benchmark: serial reference vs OpenMP sample fan-out on the stock
// configuration. Also verifies both produce byte-identical rankings.

#include <chrono>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "honeyroles/engine.hpp"
#include "honeyroles/report.hpp"

using namespace honeyroles;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string csv_of(const ExperimentResult& result) {
    std::ostringstream out;
    write_rankings_csv(out, result);
    return out.str();
}

}  // namespace

int main() {
    SimConfig cfg;
    cfg.compromised_selectors = {"edge:0"};

#ifdef _OPENMP
    std::cout << "OpenMP threads available: " << omp_get_max_threads() << "\n";
#else
    std::cout << "built without OpenMP; both runs are serial\n";
#endif
    std::cout << "samples=" << cfg.samples << " rounds=" << cfg.rounds
              << " connections/round=" << cfg.round_length << "\n";

    auto start = std::chrono::steady_clock::now();
    const ExperimentResult serial = monte_carlo(cfg, /*parallel=*/false);
    const double serial_time = seconds_since(start);
    std::cout << "serial reference : " << serial_time << " s\n";

    start = std::chrono::steady_clock::now();
    const ExperimentResult parallel = monte_carlo(cfg, /*parallel=*/true);
    const double parallel_time = seconds_since(start);
    std::cout << "openmp           : " << parallel_time << " s\n";
    std::cout << "speedup          : " << serial_time / parallel_time << "x\n";

    if (csv_of(serial) != csv_of(parallel)) {
        std::cout << "MISMATCH: parallel output differs from the serial reference\n";
        return 1;
    }
    std::cout << "outputs identical\n";
    return 0;
}
