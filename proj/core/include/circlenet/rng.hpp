// Counter-based random streams: every draw is a pure function of
// (seed, stream, counter), so simulations are bitwise reproducible no matter
// how work is scheduled across threads.
#pragma once

#include <cmath>
#include <cstdint>

namespace circlenet {

// 64-bit finalizer with full avalanche (the splitmix64 output stage).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ULL;

// Key of one noise stream: one per (trajectory, step) pair.
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream,
                                std::uint64_t counter) {
  return mix64(mix64(seed + kGolden64 * (stream + 1)) +
               kGolden64 * (counter + 1));
}

// n-th uniform draw of a stream, in (0, 1].
inline double stream_uniform(std::uint64_t key, std::uint64_t n) {
  const std::uint64_t bits = mix64(key + kGolden64 * n) >> 11;  // 53 bits
  return (double(bits) + 1.0) * 0x1.0p-53;
}

// 2j-th and (2j+1)-th standard normal draws of a stream (Box-Muller pair).
inline void stream_normal_pair(std::uint64_t key, std::uint64_t j, double* z0,
                               double* z1) {
  const double u1 = stream_uniform(key, 2 * j);
  const double u2 = stream_uniform(key, 2 * j + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  *z0 = r * std::cos(a);
  *z1 = r * std::sin(a);
}

}  // namespace circlenet
