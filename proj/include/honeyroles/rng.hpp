// Deterministic random source shared by all simulator components.
//
// Every stochastic choice in a run is drawn from an Rng seeded through
// derive_sample_seed(master_seed, sample_index), so serial and parallel
// executions of the same configuration produce identical trajectories.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace honeyroles {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Splittable per-sample seed: sample i gets splitmix64 applied to the
// master seed offset by i+1 golden-ratio steps. Independent of execution
// order, so sample streams never overlap regardless of thread schedule.
inline std::uint64_t derive_sample_seed(std::uint64_t master_seed, std::uint64_t sample_index) {
    return splitmix64(master_seed + (sample_index + 1) * 0x9e3779b97f4a7c15ULL);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Unbiased integer in [0, n).
    std::uint64_t index(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::index: empty range");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_unit() < p; }

    double exponential(double mean) { return -mean * std::log1p(-next_unit()); }

    // Knuth's method; fine for the small means used here.
    int poisson(double mean) {
        const double threshold = std::exp(-mean);
        double product = 1.0;
        int count = -1;
        do {
            ++count;
            product *= next_unit();
        } while (product > threshold);
        return count;
    }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        if (items.empty()) throw std::invalid_argument("Rng::pick: empty list");
        return items[index(items.size())];
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace honeyroles
