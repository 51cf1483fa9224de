#pragma once

#include <cstdint>

namespace widths {

// Counter-based uniform sampler.  Every draw is a pure function of
// (seed, sample index, coordinate), so a sample range can be split across
// workers arbitrarily without changing a single output bit.
namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

}  // namespace detail

// Uniform in [0, 1) with 53 random bits.
inline double uniform01(std::uint64_t seed, std::uint64_t sample,
                        std::uint64_t coordinate) {
  std::uint64_t h = detail::mix64(seed ^ (0x9e3779b97f4a7c15ULL * (sample + 1)));
  h = detail::mix64(h ^ (0xc2b2ae3d27d4eb4fULL * (coordinate + 1)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Uniform in [-r, r).
inline double uniform_symmetric(std::uint64_t seed, std::uint64_t sample,
                                std::uint64_t coordinate, double r) {
  return r * (2.0 * uniform01(seed, sample, coordinate) - 1.0);
}

}  // namespace widths
