#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

namespace advsel {

// Source of randomness used by every randomized mechanism.  Mechanisms draw
// through this interface so tests can script exact draw sequences, and so
// simulation results are reproducible bit for bit across platforms and worker
// counts.  The standard library's distributions are avoided on purpose: their
// output is implementation defined.
class RandomSource {
  public:
    virtual ~RandomSource() = default;

    virtual std::uint64_t next_u64() = 0;

    // Uniform integer in [0, bound) by masked rejection, so every value is
    // exactly equally likely.
    virtual std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) {
            throw std::invalid_argument("next_below: zero bound");
        }
        std::uint64_t mask = ~std::uint64_t{0} >> __builtin_clzll(bound | 1);
        for (;;) {
            std::uint64_t v = next_u64() & mask;
            if (v < bound) {
                return v;
            }
        }
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via the Box-Muller transform.  Consumes exactly two
    // uniform draws per call and keeps no carry-over state, so the draw count
    // of any procedure is predictable.
    double next_normal() {
        double u1 = 1.0 - next_unit();  // (0, 1], keeps the log finite
        double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace detail

// xoshiro256** generator with named derived streams.  A stream is identified
// by (master seed, label, replicate index); distinct identifiers give
// independent streams, and the same identifier always reproduces the same
// sequence.  Labels name the use site ("mechanism:random", "population", ...)
// so adding a consumer never perturbs existing ones.
class RandomStream final : public RandomSource {
  public:
    RandomStream(std::uint64_t master_seed, std::string_view label, std::uint64_t replicate = 0) {
        std::uint64_t seed = master_seed;
        seed = detail::splitmix64(seed) ^ detail::fnv1a64(label);
        seed = detail::splitmix64(seed) ^ (replicate * 0x9E3779B97F4A7C15ULL);
        std::uint64_t init = detail::splitmix64(seed);
        for (auto& word : state_) {
            word = detail::splitmix64(init);
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
            state_[0] = 1;  // all-zero is the one forbidden xoshiro state
        }
    }

    std::uint64_t next_u64() override {
        auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

  private:
    std::uint64_t state_[4];
};

// Uniform random strict ranking: levels are a Fisher-Yates permutation of
// 1..n, so every ordering of the n items is equally likely.
inline std::vector<int> random_strict_levels(int n, RandomSource& rng) {
    if (n <= 0) {
        throw std::invalid_argument("random_strict_levels: n must be positive");
    }
    std::vector<int> levels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        levels[static_cast<std::size_t>(i)] = i + 1;
    }
    for (int i = n - 1; i > 0; --i) {
        auto j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(levels[static_cast<std::size_t>(i)], levels[static_cast<std::size_t>(j)]);
    }
    return levels;
}

// Random weak ranking: draw a level count L uniformly from 1..n, give each
// item a uniform level in 1..L, then relabel so the used levels are exactly
// 1..t for some t.  Covers everything from fully tied to fully strict.
inline std::vector<int> random_contiguous_levels(int n, RandomSource& rng) {
    if (n <= 0) {
        throw std::invalid_argument("random_contiguous_levels: n must be positive");
    }
    auto level_count = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n))) + 1;
    std::vector<int> raw(static_cast<std::size_t>(n));
    for (auto& level : raw) {
        level = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(level_count))) + 1;
    }
    std::vector<int> used;
    for (int level : raw) {
        if (std::find(used.begin(), used.end(), level) == used.end()) {
            used.push_back(level);
        }
    }
    std::sort(used.begin(), used.end());
    for (auto& level : raw) {
        auto at = std::find(used.begin(), used.end(), level) - used.begin();
        level = static_cast<int>(at) + 1;
    }
    return raw;
}

}  // namespace advsel
