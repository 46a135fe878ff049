#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace lcc {

/// Seedable random stream with a fully specified algorithm so that other
/// implementations can reproduce it draw for draw.
///
///  - engine: std::mt19937_64 seeded with the 64-bit seed directly
///  - uniform(): top 53 bits of one engine output, scaled to [0, 1)
///  - normal(): Box-Muller, cosine branch only, from two uniforms u1, u2:
///        sqrt(-2 ln(1 - u1)) * cos(2 pi u2)
///  - split(k): child stream seeded with splitmix64(seed ^ splitmix64(k))
///
/// The standard library distributions are avoided on purpose: their output
/// is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Uses rejection to stay unbiased.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    Rng split(std::uint64_t stream) const { return Rng(splitmix64(seed_ ^ splitmix64(stream))); }

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace lcc
