#ifndef AGSLM_RNG_HPP
#define AGSLM_RNG_HPP

#include <cmath>
#include <cstdint>

namespace agslm {

// Self-contained PRNG so simulation output is bit-identical across platforms
// and standard-library versions. splitmix64 seeds xoshiro256++; streams are
// derived by hashing (master_seed, trial, substream) so trial count and
// worker count never perturb results.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t trial, std::uint64_t substream) {
        std::uint64_t mix = master_seed;
        (void)splitmix64(mix);
        mix ^= 0xA3C59AC2E1F4905BULL * (trial + 1);
        (void)splitmix64(mix);
        mix ^= 0x9E6C63D0876A3EF5ULL * (substream + 1);
        for (auto& word : state_) word = splitmix64(mix);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// `count` low-entropy bits, count <= 64.
    std::uint64_t bits(unsigned count) { return next_u64() >> (64u - count); }

    /// Uniform in [0, n) by rejection; exact and platform-independent.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t draw;
        do {
            draw = next_u64();
        } while (draw >= limit);
        return draw % n;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double unit_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard exponential via inverse CDF.
    double exponential() { return -std::log1p(-unit_double()); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

} // namespace agslm

#endif // AGSLM_RNG_HPP
