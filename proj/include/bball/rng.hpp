#pragma once

#include <cstdint>
#include <vector>

namespace bball {

/// Counter-based generator (splitmix64 applied to an incrementing counter).
/// Streams derived from (seed, stream id) are independent, so parallel
/// consumers (e.g. forest trees indexed by estimator) stay reproducible
/// regardless of scheduling. Identical output on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t stream = 0)
      : state_(mix(mix(seed + 0x9E3779B97F4A7C15ULL) ^ mix(stream + 0x1D8AF066ULL))) {}

  uint64_t next() { return mix(state_ += 0x9E3779B97F4A7C15ULL); }

  /// Uniform in [0, n). Modulo bias is irrelevant at the scales used here.
  uint64_t next_below(uint64_t n) { return next() % n; }

  /// Uniform in [0, 1) with 53 bits of precision.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double next_range(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  uint64_t state_;
};

}  // namespace bball
