#pragma once

// Seeded splitmix64 stream.  Small state, cheap construction, so each work
// item (sample index, worker stripe) can own an independent substream that
// is a pure function of (seed, index) — reproducibility never depends on
// the worker count.

#include <cstdint>

namespace nilsat {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound). The modulo bias is negligible for the tiny
  // bounds used here and keeps the draw count deterministic.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  int below_int(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

 private:
  std::uint64_t state_;
};

// Derives the substream seed for item `index` of a run seeded with `seed`.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
  return mix.next();
}

}  // namespace nilsat
