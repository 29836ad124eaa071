#pragma once

#include <cstdint>
#include <random>

namespace bilateral {

/// Seeded pseudo-random source used by every randomized suite.
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the standard.
/// Real numbers are built from the top 53 bits of each draw instead of going
/// through std::uniform_real_distribution, whose algorithm is left to the
/// implementation. Same seed, same stream, on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

  /// Child stream for an independent sub-experiment.
  Rng split() { return Rng(engine_() ^ 0x9e3779b97f4a7c15ULL); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bilateral
