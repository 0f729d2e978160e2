#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace guard {

/// xoshiro256** generator with explicit, portable draw functions.
/// Everything the simulator draws goes through this type so that a run is
/// bit-reproducible independent of platform or standard-library version
/// (std::normal_distribution and friends are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);

    /// Box-Muller transform; one value per call, no cached spare.
    double normal(double mean, double stddev);

    /// Knuth multiplication for small means, rounded-normal approximation
    /// above 30 where the product underflows.
    long poisson(double mean);

private:
    std::array<std::uint64_t, 4> state_;
};

/// Root seed plus deterministic named substreams. Each module draws from
/// its own substream, so adding a module (or reordering draws inside one)
/// never perturbs the sequences other modules see.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    /// Substream keyed by name: same (seed, name) always yields the same
    /// generator, and distinct names yield decorrelated generators.
    Rng substream(std::string_view name) const;

private:
    std::uint64_t seed_;
};

/// FNV-1a, used for substream naming and config digests.
std::uint64_t fnv1a(std::string_view s);

}  // namespace guard
