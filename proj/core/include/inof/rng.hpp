#pragma once

#include <cstdint>
#include <vector>

namespace inof {

// 64-bit avalanche finalizer (the SplitMix64 output function).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// SplitMix64 stream (Steele/Lea/Flood). Used instead of <random> engines in
// every reproducibility-sensitive path: the standard distributions are not
// bit-portable across library implementations, this generator is.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // Uniform in [0, bound), bound > 0. Unbiased via rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Seed for one realization. The triple (master_seed, slot, realization) is
// folded through two avalanche rounds so that distinct triples give
// unrelated streams. This derivation is part of the output contract: the
// same triple must produce the same permutation sequence on every platform
// and for every thread count.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed,
                                    std::uint64_t slot,
                                    std::uint64_t realization) {
    std::uint64_t h = master_seed;
    h = mix64(h + 0x9E3779B97F4A7C15ULL * (slot + 1));
    h = mix64(h + 0x9E3779B97F4A7C15ULL * (realization + 1));
    return h;
}

// In-place Fisher-Yates shuffle driven by the portable stream above.
template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace inof
