// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <random>

namespace divgp {

using Random = std::mt19937_64;

namespace random {
    inline auto index(Random& rng, std::size_t n) -> std::size_t
    {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }

    inline auto uniform(Random& rng, double lo, double hi) -> double
    {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }

    inline auto normal(Random& rng, double mean, double stddev) -> double
    {
        return std::normal_distribution<double>(mean, stddev)(rng);
    }

    inline auto bernoulli(Random& rng, double p) -> bool
    {
        return std::bernoulli_distribution(p)(rng);
    }

    // SplitMix64 finalizer; used to derive independent seeds from a master seed.
    constexpr auto mix_seed(std::uint64_t x) noexcept -> std::uint64_t
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31U);
    }
} // namespace random

} // namespace divgp
