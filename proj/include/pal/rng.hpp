#pragma once

#include <cstdint>

namespace pal {

/// SplitMix64 mixing step. Used to derive independent, platform-stable
/// streams from a session seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Top 53 bits of `bits` mapped onto [0, 1).
constexpr double unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Small deterministic generator (SplitMix64 stream). Unlike the standard
/// distributions its output is identical on every platform.
class SplitMix64 {
public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr double uniform() noexcept { return unit_interval(next()); }

  /// Child generator whose stream does not overlap this one's in practice.
  constexpr SplitMix64 split() noexcept { return SplitMix64{next() ^ 0xD1B54A32D192ED03ULL}; }

private:
  std::uint64_t state_;
};

} // namespace pal
