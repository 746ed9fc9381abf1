#pragma once

#include <cstdint>
#include <cmath>

namespace hsssi {

/// Identifies one logical random stream. Distinct (seed, stream_id) pairs
/// give statistically independent sequences; equal pairs give bitwise
/// identical ones, regardless of thread scheduling.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// PCG64 XSL-RR 128/64. Stream selection through the odd increment makes
/// every stream a distinct permutation of the same period.
class Pcg64 {
 public:
  Pcg64() : Pcg64(RngSpec{}) {}

  explicit Pcg64(RngSpec spec) {
    std::uint64_t s = spec.seed;
    const std::uint64_t hi = splitmix64(s);
    const std::uint64_t lo = splitmix64(s);
    std::uint64_t t = spec.stream_id ^ 0xDA3E39CB94B95BDBull;
    const std::uint64_t inc_hi = splitmix64(t);
    const std::uint64_t inc_lo = splitmix64(t);
    inc_ = ((static_cast<u128>(inc_hi) << 64) | inc_lo) | 1u;
    state_ = 0u;
    next();
    state_ += (static_cast<u128>(hi) << 64) | lo;
    next();
  }

  std::uint64_t next() {
    state_ = state_ * kMult + inc_;
    const std::uint64_t xored =
        static_cast<std::uint64_t>(state_ >> 64) ^ static_cast<std::uint64_t>(state_);
    const unsigned rot = static_cast<unsigned>(state_ >> 122);
    return (xored >> rot) | (xored << ((64u - rot) & 63u));
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1], safe as argument of log.
  double uniform_pos() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double exponential() { return -std::log(uniform_pos()); }

  /// Marsaglia polar method; deterministic across platforms with IEEE doubles.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  /// Knuth for small means, PTRS-style rejection is overkill here: particle
  /// field means stay modest per unit window, so inversion by multiplication
  /// is fine up to mean ~ 700 before exp underflow; above that use normal tail.
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 700.0) {
      const double l = std::exp(-mean);
      std::uint64_t k = 0;
      double p = uniform_pos();
      while (p > l) {
        ++k;
        p *= uniform_pos();
      }
      return k;
    }
    const double x = mean + std::sqrt(mean) * normal();
    return x < 0.0 ? 0u : static_cast<std::uint64_t>(x + 0.5);
  }

 private:
  using u128 = unsigned __int128;
  static constexpr u128 kMult =
      (static_cast<u128>(2549297995355413924ull) << 64) | 4865540595714422341ull;
  u128 state_ = 0;
  u128 inc_ = 1;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Child stream derivation: hashes parent identity with child indices so that
/// (replica, particle) lanes decouple reproducibly. Collisions among derived
/// 64-bit ids are birthday-rare and at worst correlate two particles.
inline RngSpec child_stream(RngSpec parent, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t s = parent.stream_id;
  s = splitmix64(s);
  s ^= 0x9E3779B97F4A7C15ull * (a + 1);
  s = splitmix64(s);
  s ^= 0xC2B2AE3D27D4EB4Full * (b + 1);
  s = splitmix64(s);
  return RngSpec{parent.seed, s | 0x8000000000000000ull};
}

}  // namespace hsssi
