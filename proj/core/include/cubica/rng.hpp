#pragma once

#include <cstdint>
#include <random>

namespace cubica {

/// Seedable, splittable generator. Output is bit-reproducible across
/// platforms: mt19937_64 is fully specified and bounded draws use our own
/// rejection sampling instead of std::uniform_int_distribution.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, bound).
  std::uint64_t uniform(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % bound;
  }

  double uniform_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Independent child stream; advances this generator by one draw.
  Rng split() { return Rng(mix(engine_() ^ 0x9e3779b97f4a7c15ULL)); }

  /// Stream for the i-th item of a batch keyed by (seed, i); does not
  /// touch this generator.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix(seed) ^ mix(index + 0x632be59bd9b4e019ULL));
  }

private:
  // splitmix64 finaliser
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

} // namespace cubica
