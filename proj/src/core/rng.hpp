#pragma once

#include <cstdint>
#include <random>

namespace semfuzz {

// Seeded RNG with platform-stable derived draws. std::mt19937_64 output is
// fully specified by the standard; the bounded/real mappings below avoid
// std::uniform_*_distribution, whose results differ between stdlibs.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, n). n == 0 returns 0.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    return next_u64() % n;
  }

  // Uniform in [lo, hi] inclusive.
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
    return lo + below(hi - lo + 1);
  }

  std::uint8_t byte() { return static_cast<std::uint8_t>(next_u64() & 0xff); }

  bool coin() { return (next_u64() & 1) != 0; }

  // Uniform in [0, 1) with 53 bits of precision.
  double unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool chance(double p) { return unit() < p; }

private:
  std::mt19937_64 engine_;
};

}  // namespace semfuzz
