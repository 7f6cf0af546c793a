#pragma once

#include <cstdint>
#include <random>

namespace geotrack {

/// Deterministic random stream with independent substreams.
///
/// Substreams are derived from the stream's original seed and an index, never
/// from the current engine state, so (seed, run_index) reproduces the same draws
/// regardless of how much the parent stream was consumed and in which order
/// substreams are created. Streams are single-owner: move-only, never shared
/// across concurrent tasks.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed)
        : seed_(seed), engine_(mix(seed)) {}

    RandomStream(RandomStream&&) = default;
    RandomStream& operator=(RandomStream&&) = default;
    RandomStream(const RandomStream&) = delete;
    RandomStream& operator=(const RandomStream&) = delete;

    std::uint64_t seed() const { return seed_; }

    /// Independent stream keyed by (seed, index).
    RandomStream substream(std::uint64_t index) const {
        return RandomStream(mix(seed_ ^ mix(index + 0x632be59bd9b4e019ULL)));
    }

    double normal() { return normal_(engine_); }

    /// Uniform on [0, 1).
    double uniform() { return uniform_(engine_); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, n); n must be positive.
    std::uint64_t uniform_index(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);   // n >= 1
    }

private:
    static std::uint64_t mix(std::uint64_t x) {
        // splitmix64 finalizer
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

} // namespace geotrack
