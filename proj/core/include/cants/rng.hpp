#pragma once

#include <cstdint>
#include <random>

namespace cants {

/// Seeded random source shared by every stochastic component.
///
/// Uniform draws are built directly from the engine bits so that they replay
/// identically across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal(double mean = 0.0, double sigma = 1.0)
    {
        return std::normal_distribution<double>(mean, sigma)(engine_);
    }

    /// Uniform integer in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_); }

    std::uint64_t next_u64() { return engine_(); }

    /// Independent child stream derived from this seed and a label.
    static Rng derive(std::uint64_t seed, std::uint64_t label)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(label), static_cast<std::uint32_t>(label >> 32)};
        std::mt19937_64 e(seq);
        return Rng(e());
    }

private:
    std::mt19937_64 engine_;
};

} // namespace cants
