#pragma once

#include <cstdint>

namespace sdfield {

// Counter-based random numbers: every draw is a pure function of the key and
// the draw index, so a stream can be evaluated from any thread in any order
// without state. Mixing uses the splitmix64 finalizer.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t v) {
    return mix64(seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2)));
}

// Stream of uniforms addressed by (key, counter). The key is typically built
// from (global seed, stream salt, cell index, frame index).
struct RngStream {
    uint64_t key = 0;
    uint64_t counter = 0;

    explicit RngStream(uint64_t key_) : key(key_) {}

    uint64_t next_u64() { return mix64(key ^ mix64(counter++)); }

    // Uniform in [0, 1) with 24 bits of mantissa.
    float next_float() { return float(next_u64() >> 40) * 0x1p-24f; }
};

// Stream salts keep independent consumers of the same seed decorrelated.
enum class RngUse : uint64_t {
    refine_rays = 1,
    shadow_jitter = 2,
    reference_cone = 3,
    test_data = 4,
};

inline RngStream make_stream(uint64_t seed, RngUse use, uint64_t a = 0, uint64_t b = 0,
                             uint64_t c = 0) {
    uint64_t k = hash_combine(seed, static_cast<uint64_t>(use));
    k = hash_combine(k, a);
    k = hash_combine(k, b);
    k = hash_combine(k, c);
    return RngStream{k};
}

} // namespace sdfield
