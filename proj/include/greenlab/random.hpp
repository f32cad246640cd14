#ifndef GREENLAB_RANDOM_HPP
#define GREENLAB_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "greenlab/core.hpp"

namespace greenlab {

// std::mt19937_64 output is fully specified by the standard; the
// distributions are not, so the mapping to indices and reals is done here to
// keep streams identical across standard libraries.
using Rng = std::mt19937_64;

/// Odd multiplier used to derive per-chain seeds: seed ^ (index * kSeedStride).
inline constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return seed ^ (index * kSeedStride);
}

/// Uniform integer in [0, n).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const unsigned __int128 product = static_cast<unsigned __int128>(rng()) * n;
  return static_cast<std::uint64_t>(product >> 64);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_real(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller (one value per call, second discarded).
inline double standard_normal(Rng& rng) {
  double u1 = uniform_real(rng);
  while (u1 <= 0.0) u1 = uniform_real(rng);
  const double u2 = uniform_real(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline Complex complex_normal(Rng& rng) {
  return {standard_normal(rng), standard_normal(rng)};
}

/// Radical-inverse (Halton) coordinate of `index` in the given prime base.
inline double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, result = 0.0;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return result;
}

inline constexpr unsigned kHaltonPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

}  // namespace greenlab

#endif  // GREENLAB_RANDOM_HPP
