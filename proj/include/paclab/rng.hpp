// rng.hpp
//
// Seeded random streams for the trial harness. Every trial owns its own
// engine, seeded from (master_seed, m, trial_index) through a SplitMix64
// finalizer chain, so serial and parallel runs draw identical numbers.
#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace paclab {

/// SplitMix64 step: adds the golden-ratio increment 0x9E3779B97F4A7C15 and
/// applies the Stafford variant-13 finalizer (shifts 30/27/31, multipliers
/// 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// seed = splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index)
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index) noexcept {
    return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index);
}

/// Stream id reserved for the shared ground truth in fixed-GT mode. Trial
/// streams use the sample size m >= 1, so stream 0 never collides.
inline constexpr std::uint64_t kGroundTruthStream = 0;

/// Thin wrapper over std::mt19937_64. The engine's output sequence is fixed
/// by the standard; the conversions below are written out by hand because
/// std::uniform_*_distribution differ between standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), bound > 0, rejection-sampled.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit =
            std::numeric_limits<std::uint64_t>::max() -
            std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace paclab
