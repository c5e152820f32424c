#pragma once

#include <cstdint>
#include <random>

namespace curvecast {

// Reproducible randomness. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard (the 10000th draw from the default
// seed is 9981545732273789042). The distributions below are written out
// instead of using <random>'s, whose algorithms vary between standard
// libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), unbiased by rejection.
    std::uint64_t below(std::uint64_t n);

    /// Standard normal by Box-Muller; consumes exactly two draws.
    double normal();

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Seed for sub-stream `index` of `seed`: mix64(seed ^ mix64(index + 1)).
/// Independent of the order in which sub-streams are consumed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

} // namespace curvecast
