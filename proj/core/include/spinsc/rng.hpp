#pragma once

#include <cstdint>

namespace spinsc {

// Counter-based randomness. A draw is a pure function of (seed, stream, counter),
// so results do not depend on evaluation order or thread scheduling.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

// Uniform double in [0, 1) with 53 random bits.
inline double to_unit(std::uint64_t bits) { return double(bits >> 11) * 0x1.0p-53; }

inline double uniform_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return to_unit(hash_draw(seed, stream, counter));
}

// Derive a child seed, e.g. one per trial or per sweep point.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace spinsc
