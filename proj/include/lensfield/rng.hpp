#pragma once

#include <cstdint>

namespace lensfield {

// Counter-based RNG: every random number is a pure hash of
// (pixel, frame, sample, dimension, global seed), so results are
// independent of evaluation order and worker count.

inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t hash_combine(uint64_t h, uint64_t word) {
    return mix64(h + 0x9e3779b97f4a7c15ULL + word);
}

inline uint64_t counter_hash(uint64_t seed, uint32_t x, uint32_t y,
                             uint32_t frame, uint32_t sample, uint32_t dim) {
    uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
    h = hash_combine(h, (static_cast<uint64_t>(x) << 32) | y);
    h = hash_combine(h, (static_cast<uint64_t>(frame) << 32) | sample);
    h = hash_combine(h, dim);
    return h;
}

// Uniform double in [0, 1).
inline double rand01(uint64_t seed, uint32_t x, uint32_t y,
                     uint32_t frame, uint32_t sample, uint32_t dim) {
    return static_cast<double>(counter_hash(seed, x, y, frame, sample, dim) >> 11) *
           0x1.0p-53;
}

}  // namespace lensfield
