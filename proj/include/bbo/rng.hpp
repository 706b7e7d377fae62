#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace bbo {

// splitmix64 finalizer; decorrelates seeds that differ in few bits
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix_seed(seed ^ mix_seed(index + 1));
}

// Deterministic generator: identical seed and call sequence gives identical
// output, independent of platform stdlib (all distributions are hand-rolled
// on top of the fully specified mt19937_64 stream).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(mix_seed(seed)) {}

  std::uint64_t seed() const { return seed_; }

  // Fresh stream for a subtask; depends only on (seed, index), not on how
  // much of this stream has been consumed.
  SeededRng derive(std::uint64_t index) const {
    return SeededRng(derive_seed(seed_, index));
  }

  std::uint64_t next_u64() { return engine_(); }

  // uniform on [0, 1), 53-bit resolution
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // uniform integer on [0, bound), bound > 0; rejection keeps it exact
  std::uint64_t uniform_int(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  bool coin() { return (engine_() >> 63) != 0; }

  // standard normal, Marsaglia polar method
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace bbo
