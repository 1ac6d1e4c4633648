#pragma once

#include <cstdint>

#include "adtnc/error.hpp"

namespace adtnc {

/* Counter-based generator with explicit splitting. A draw hashes (key, counter)
 * through the splitmix64 finalizer; split(stream) derives an independent child
 * keyed by (key, stream) without touching the parent state. Parallel tasks can
 * therefore share one root seed and still produce a schedule-independent,
 * reproducible stream each.
 */
class SplitRng {
 public:
  explicit SplitRng(uint64_t seed) : key_(mix(seed + kTag0)) {}

  uint64_t next() { return mix(key_ + (++ctr_) * kGolden); }

  // Uniform over [0, n); rejection sampling, exact for every n >= 1.
  uint64_t bounded(uint64_t n) {
    if (n == 0) throw UsageError("SplitRng::bounded: empty range");
    if (n == 1) return 0;
    const uint64_t kMax = ~uint64_t{0};
    const uint64_t limit = kMax - kMax % n;  // largest multiple of n <= 2^64-1
    uint64_t v = next();
    while (v >= limit) v = next();
    return v % n;
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return double(next() >> 11) * 0x1.0p-53; }

  SplitRng split(uint64_t stream) const {
    SplitRng child(0);
    child.key_ = mix(key_ ^ mix(stream + kTag1));
    child.ctr_ = 0;
    return child;
  }

 private:
  static constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  static constexpr uint64_t kTag0 = 0x632BE59BD9B4E019ull;
  static constexpr uint64_t kTag1 = 0xD6E8FEB86659FD93ull;

  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  uint64_t key_;
  uint64_t ctr_ = 0;
};

}  // namespace adtnc
