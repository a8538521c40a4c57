#pragma once

#include <cstdint>
#include <random>

namespace frechet {

/// Seeded pseudo-random source handed explicitly to every sampling routine.
///
/// Uniform variates are derived from the raw 64-bit engine output rather than
/// from <random> distributions, so sample streams are identical across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }

  /// Derive an independent child stream (used to give each worker its own generator).
  Rng split() { return Rng(engine_() ^ 0x9e3779b97f4a7c15ULL); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace frechet
