#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace vetl {

// Mixes a seed into a well-distributed 64-bit value. Also usable as a tiny
// stateless PRNG by repeatedly feeding the result back in.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t mix_seeds(uint64_t a, uint64_t b) {
    return splitmix64(a ^ splitmix64(b));
}

// xoshiro256** with fully specified output conversions, so that streams are
// reproducible independent of any standard-library distribution details.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& word : state_) {
            sm = splitmix64(sm);
            word = sm;
        }
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound).
    uint64_t next_below(uint64_t bound) {
        // Modulo bias is negligible for the bounds used here (bound << 2^64).
        return bound == 0 ? 0 : next_u64() % bound;
    }

    // Standard normal via Box-Muller.
    double next_normal() {
        const double u1 = 1.0 - next_double();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Exponential with the given mean.
    double next_exponential(double mean) {
        const double u = 1.0 - next_double();
        return -mean * std::log(u);
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t state_[4];
};

}  // namespace vetl
