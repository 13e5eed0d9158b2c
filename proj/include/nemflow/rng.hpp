#pragma once

#include <cstdint>

namespace nemflow {

// SplitMix64 (Steele/Lea/Flood 2014). Chosen as the seed-expansion generator
// because the whole state is one u64 and the output sequence is defined by a
// short closed-form mix, so runs are bit-reproducible on any platform.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Order-independent per-mode stream: the draw for mode (k1, k2) depends only
// on (seed, k1, k2), never on traversal order, so any loop structure produces
// the same field.
inline SplitMix64 mode_stream(std::uint64_t seed, int k1, int k2) {
  SplitMix64 h(seed ^ (0x632be59bd9b4e019ULL + (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k1)) << 32) +
                       static_cast<std::uint64_t>(static_cast<std::uint32_t>(k2))));
  h.next();
  return h;
}

}  // namespace nemflow
