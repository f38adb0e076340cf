#pragma once

#include <cstdint>
#include <random>

namespace cocite {

// Deterministic random source. Wraps mt19937_64 but produces doubles and
// bounded integers through fixed bit manipulation, so results do not depend
// on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0,1) with 53-bit resolution.
    double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), unbiased via rejection.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

private:
    std::mt19937_64 engine_;
};

// splitmix64 finalizer, used to derive well-separated substream seeds.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Substream `index` of master seed `seed`. Parallel sections must draw each
// work item's randomness from its own substream so that worker count and
// scheduling never change results.
inline Rng substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix_seed(seed ^ mix_seed(index)));
}

}  // namespace cocite
