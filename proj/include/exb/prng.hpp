#ifndef EXB_PRNG_HPP
#define EXB_PRNG_HPP

#include <cstdint>

namespace exb {

/// SplitMix64 stream (Steele, Lea & Flood 2014). Chosen over std::mt19937 +
/// std::uniform_real_distribution because its output is specified bit-exactly,
/// so seeded runs reproduce across compilers and platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 significant bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double next_double(double lo, double hi) {
    return lo + next_double() * (hi - lo);
  }

 private:
  std::uint64_t state_;
};

}  // namespace exb

#endif
