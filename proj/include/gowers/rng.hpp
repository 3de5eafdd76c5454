#pragma once

#include <cstdint>

namespace gowers {

// SplitMix64: every stream is a pure function of its seed, and split() derives an
// independent child stream, so results do not depend on evaluation order.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    return mix(z);
  }
  std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }
  SplitRng split() { return SplitRng(mix(next() ^ 0xD1B54A32D192ED03ULL)); }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace gowers
