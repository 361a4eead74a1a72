#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace tcdiff {

/// splitmix64 mixing step; used for seed derivation everywhere so that
/// sub-streams (validation split, synth generation, GA restarts) are
/// decorrelated but fully determined by the user-facing seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derive the seed for numbered sub-stream `stream` of `base`.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base ^ splitmix64(stream));
}

/// Derive the seed for a named component ("split", "synth", "evolve", ...).
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return derive_seed(base, h);
}

/// Deterministic random source. Wraps mt19937_64 but produces doubles and
/// bounded integers through explicit arithmetic, not std:: distributions,
/// so that identical seeds give identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be > 0. Unbiased (rejection).
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    bool next_bool() { return (next_u64() >> 63) != 0; }

    /// Bernoulli with probability p.
    bool next_bernoulli(double p) { return next_double() < p; }

    /// Normal via Box-Muller (one value per pair of uniforms).
    double next_normal(double mean, double sigma) {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double z = std::sqrt(-2.0 * std::log(u1)) *
                         std::cos(2.0 * 3.14159265358979323846 * u2);
        return mean + sigma * z;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace tcdiff
