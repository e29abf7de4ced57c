//===--- rng.hpp - Splittable deterministic random stream ----------------===//
//
// splitmix64. Chosen over <random> engines because the exact stream is part
// of the reproducibility contract: seeds recorded in reports must replay to
// identical values on any platform, and the standard distributions leave
// their output unspecified.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <cstdint>

namespace vtkit {

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n); n must be positive. Rejection keeps it unbiased.
  uint64_t below(uint64_t n) {
    uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform in [lo, hi], inclusive on both ends.
  int64_t range(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo) + 1));
  }

  bool coin() { return next() & 1; }

  // Independent child stream for the given index. Children of one parent
  // never depend on how much of the parent stream was consumed after the
  // split point, which makes per-trial parallelism reproducible.
  Rng split(uint64_t index) const {
    uint64_t z = state_ + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return Rng(z ^ (z >> 31));
  }

 private:
  uint64_t state_;
};

}  // namespace vtkit
