#pragma once
#include <cstdint>
#include <random>

namespace sdmux {

// Deterministic uniform draws. Uses the raw 64-bit Mersenne stream directly
// (top 53 bits) so sequences are identical across compilers and platforms,
// unlike std::uniform_real_distribution which is implementation-defined.
class Uniform {
public:
  explicit Uniform(std::uint64_t seed) : eng_(seed) {}

  // in [0, 1)
  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // in [lo, hi)
  double range(double lo, double hi) { return lo + (hi - lo) * u01(); }

  std::uint64_t raw() { return eng_(); }

private:
  std::mt19937_64 eng_;
};

}  // namespace sdmux
