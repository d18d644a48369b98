#pragma once

#include <cstdint>
#include <string_view>

// Deterministic hashing and seeded draws. Everything downstream of a seed
// must be byte-identical across platforms, so no std::uniform_real_distribution
// (its output is implementation-defined); draws are built from fixed-width
// integer mixing instead.

namespace poisim {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x00000100000001b3ULL;

/// 64-bit FNV-1a over the bytes of `s`.
constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = kFnvOffset;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return h;
}

/// Finalizer from the splitmix64 generator; a cheap, well-mixed 64->64 hash.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Order-sensitive combination of two seeds.
constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ b);
}

/// Map 64 random bits onto [0, 1) using the top 53 bits.
constexpr double unit_real(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform draw in [0, 1) fully determined by the seed.
constexpr double seeded_unit_real(std::uint64_t seed) {
  return unit_real(splitmix64(seed));
}

/// Symmetric jitter in [-epsilon, +epsilon] keyed by (seed, salt string).
inline double seeded_jitter(std::uint64_t seed, std::string_view salt, double epsilon) {
  const double u = seeded_unit_real(seed ^ fnv1a64(salt));
  return (2.0 * u - 1.0) * epsilon;
}

}  // namespace poisim
