#include "spinsc/rng.hpp"

namespace spinsc {

std::uint64_t mix64(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
    h = mix64(h ^ stream);
    return mix64(h + counter * 0xd1342543de82ef95ULL);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return mix64(mix64(seed) ^ mix64(tag + 0x632be59bd9b4e019ULL));
}

}  // namespace spinsc
