// rng.hpp -- seeded, portable pseudo-randomness.
//
// All randomness in the toolkit flows from a single 64-bit seed through
// SplitMix64 (Steele/Lea/Flood, "Fast splittable pseudorandom number
// generators").  The constants below are the published ones; the generator
// is platform-independent, so a seed reproduces an experiment bit-exactly
// anywhere.  Stream splitting: child streams are derived by hashing the
// parent seed with a caller-chosen label (see split_seed).
#pragma once

#include <cstdint>

namespace polystruct {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound) by rejection, so the distribution is exact and
    // identical on every platform.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        std::uint64_t limit = ~0ULL - (~0ULL % bound);
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

    int field_element(int p) { return static_cast<int>(below(static_cast<std::uint64_t>(p))); }
};

// Derive a child seed for a labelled subtask.  Feeding seed^label through one
// SplitMix64 step decorrelates sibling streams.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t label) {
    SplitMix64 g(seed ^ (0xA5A5A5A55A5A5A5AULL + label * 0x9E3779B97F4A7C15ULL));
    return g.next();
}

}  // namespace polystruct
