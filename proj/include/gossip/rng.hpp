#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace gossip {

using rng_t = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive independent sub-seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for a (master, stream...) tuple. Depends only on the values, never on
/// execution order, so parallel replicas are reproducible.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> stream) noexcept
{
    std::uint64_t h = mix64(master);
    for (auto s : stream)
        h = mix64(h ^ mix64(s + 0x632be59bd9b4e019ULL));
    return h;
}

// The distributions below are written out by hand: std:: distributions are
// implementation-defined and would break byte-for-byte reproducibility
// across standard libraries.

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(rng_t& engine) noexcept
{
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Exponential variate with the given rate (> 0).
inline double exponential(rng_t& engine, double rate) noexcept
{
    return -std::log1p(-uniform01(engine)) / rate;
}

/// Uniform integer in [0, n), n > 0. Lemire's nearly-divisionless method.
inline std::uint64_t uniform_index(rng_t& engine, std::uint64_t n) noexcept
{
    unsigned __int128 m = static_cast<unsigned __int128>(engine()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(engine()) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

inline bool bernoulli(rng_t& engine, double p) noexcept
{
    return uniform01(engine) < p;
}

} // namespace gossip
