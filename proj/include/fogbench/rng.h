#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace fogbench::rng {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a, used to fold string identifiers into substream keys.
inline std::uint64_t hash64(const char* s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (; *s; ++s) h = (h ^ static_cast<std::uint8_t>(*s)) * 0x100000001b3ULL;
  return h;
}

/// Deterministic splittable stream over splitmix64. Substreams are derived
/// from the stream's seed (not its current position), so work distributed
/// across threads draws identical values regardless of scheduling.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Child stream keyed by (a, b). Same derivation on every platform.
  Stream substream(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t h = seed_;
    h ^= a + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    std::uint64_t s = h;
    return Stream(splitmix64_next(s));
  }

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  /// Uniform double in [0,1) with 53 random bits.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("Stream::uniform: empty range");
    return lo + (hi - lo) * unit();
  }

  /// Uniform integer in [0, n). Modulo bias is below 2^-53 for the n used here.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Stream::below: n must be > 0");
    return next_u64() % n;
  }

  /// Standard normal via Box-Muller; the pair's second value is cached so the
  /// draw sequence stays platform independent.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = unit();
    } while (u1 <= 0.0);
    double u2 = unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t state_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace fogbench::rng
