#pragma once

#include <cstdint>

namespace qaoalab {

// SplitMix64 (Steele/Lea/Flood constants). Chosen over std engines because
// its output is bit-identical on every platform, which seed-indexed
// experiment artifacts require. Distinct streams for one logical seed are
// derived with derive_stream below so that topology draws and weight draws
// never interleave.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1); exact zeros are resampled.
  double next_open01() {
    double u = next_double();
    while (u == 0.0) u = next_double();
    return u;
  }

  /// Uniform double in [lo, hi).
  double next_in(double lo, double hi) { return lo + next_double() * (hi - lo); }

 private:
  std::uint64_t state_;
};

/// The k-th derived stream of `seed`: skip k outputs, reseed with the next.
inline SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t k) {
  SplitMix64 m(seed);
  for (std::uint64_t i = 0; i < k; ++i) m.next();
  return SplitMix64(m.next());
}

/// Deterministic combination of a seed with two labels (used to derive
/// per-cell seeds, e.g. self-optimization initializations).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  SplitMix64 m(seed);
  std::uint64_t h = m.next() ^ (a * 0xbf58476d1ce4e5b9ULL);
  SplitMix64 m2(h);
  return m2.next() ^ (b * 0x94d049bb133111ebULL);
}

}  // namespace qaoalab
