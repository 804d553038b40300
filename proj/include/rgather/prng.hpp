#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rgather {

// Counter-based randomness: every word is a pure function of (seed, stream
// tag, up to three counters). No generator state is threaded around, so any
// consumer can recompute exactly the bits it needs, in any order. This is
// what makes hash draws, per-vertex coin flips, and replayed traces
// reproducible bit for bit.

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Distinct tags keep independent uses of the same user seed decorrelated.
enum class Stream : std::uint64_t {
  jl_projection = 1,
  lsh_projection = 2,
  lsh_shift = 3,
  lsh_calibration = 4,
  mis_occupancy = 5,
  mis_mark = 6,
  degree_sample = 7,
  dominating_sample = 8,
  generator = 9,
  scale_sample = 10,
  scale_probe = 11,
};

inline std::uint64_t rng_word(std::uint64_t seed, Stream tag, std::uint64_t a = 0,
                              std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ static_cast<std::uint64_t>(tag));
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  return mix64(h ^ c);
}

// Uniform in [0, 1), 53 random bits.
inline double rng_unit(std::uint64_t seed, Stream tag, std::uint64_t a = 0,
                       std::uint64_t b = 0, std::uint64_t c = 0) {
  return static_cast<double>(rng_word(seed, tag, a, b, c) >> 11) * 0x1.0p-53;
}

// Standard normal via the Box-Muller cosine branch, consuming counters
// (2c, 2c+1). The transform is pinned: changing it silently changes every
// seeded hash family and every sampled set downstream.
inline double rng_gauss(std::uint64_t seed, Stream tag, std::uint64_t a = 0,
                        std::uint64_t b = 0, std::uint64_t c = 0) {
  const double u1 = rng_unit(seed, tag, a, b, 2 * c);
  const double u2 = rng_unit(seed, tag, a, b, 2 * c + 1);
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace rgather
