#pragma once

#include <cstdint>
#include <random>

namespace selfheal {

/// SplitMix64 finalizer. Used to derive independent per-replicate seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Child seed for replicate `replicate` of a run seeded with `seed`:
/// the (replicate+1)-th output of a SplitMix64 sequence started at `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replicate) noexcept
{
    return splitmix64(seed + replicate * 0x9E3779B97F4A7C15ULL);
}

/// Seeded random stream. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; the bounded draws below are written out
/// explicitly because std::uniform_*_distribution is implementation-defined.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t uniform_below(std::uint64_t bound)
    {
        // Reject the low (2^64 mod bound) values so every residue is equally likely.
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = engine_();
            if (x >= threshold) {
                return x % bound;
            }
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

} // namespace selfheal
