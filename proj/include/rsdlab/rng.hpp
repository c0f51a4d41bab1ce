#pragma once

#include <cstdint>
#include <random>

namespace rsdlab {

// SplitMix64 step; used to derive independent streams from one master seed.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Stream k of a master seed. Every Monte Carlo replicate gets its own stream
// keyed by replicate index, so results do not depend on the worker count.
inline std::mt19937_64 make_stream(uint64_t master_seed, uint64_t stream_id) {
    uint64_t s = master_seed;
    (void)splitmix64(s);
    s ^= 0xd1b54a32d192ed03ull * (stream_id + 1);
    uint64_t a = splitmix64(s), b = splitmix64(s);
    std::seed_seq seq{static_cast<uint32_t>(a), static_cast<uint32_t>(a >> 32),
                      static_cast<uint32_t>(b), static_cast<uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) { // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

} // namespace rsdlab
