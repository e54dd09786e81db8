#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace sparse {

// Deterministic 64-bit generator built on the splitmix64 mixing function.
// Every random object in the library is a pure function of a seed fed
// through this generator, so runs reproduce bit-for-bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Sub-stream derivation: mix(master + (index+1) * golden_gamma).
  // Recorded in sweep CSV headers so streams can be re-derived externally.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t index) {
    return mix(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound) by rejection.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % bound;
  }

  // Standard real gaussian via Box-Muller.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // Standard circular complex gaussian CN(0,1): Re, Im ~ N(0, 1/2).
  std::complex<double> cgaussian() {
    const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
    const double re = gaussian() * inv_sqrt2;
    const double im = gaussian() * inv_sqrt2;
    return {re, im};
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sparse
