// rng.hpp: seeded generators, unbiased bounded draws, trial-seed derivation.
//
// Every stochastic routine in the library takes an explicit generator (or a
// seed it feeds to one); there is no ambient RNG state. Bounded sampling is
// hand-rolled rejection so streams are identical across standard libraries.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace schelling {

using Rng = std::mt19937_64;

// splitmix64 step (Steele et al.); used for seed mixing, not simulation draws.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Collapse a key tuple into one seed. Order-sensitive.
inline uint64_t mix_seed(std::initializer_list<uint64_t> parts) {
    uint64_t state = 0x5bd1e995u;
    uint64_t out = 0;
    for (uint64_t p : parts) {
        state ^= p;
        out = splitmix64(state);
    }
    return out;
}

// Uniform draw in [0, n). Rejection keeps it unbiased and stdlib-independent.
inline uint64_t bounded(Rng& rng, uint64_t n) {
    if (n <= 1) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % n;
}

// Uniform double in [0,1) with 53-bit resolution.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace schelling
