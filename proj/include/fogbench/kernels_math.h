#pragma once

#include <bit>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <limits>

// Shared exp/log cores. The SIMD kernel variants mirror these operation for
// operation (same constants, same Horner chains, mul then add, no FMA), which
// is what makes the elementwise kernels bitwise identical across
// implementations. Do not "simplify" an expression here without changing the
// SIMD mirrors in lockstep.

namespace fogbench::kernels::detail {

inline constexpr double kInvLn2 = 1.44269504088896338700e+00;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kSqrtTwo = 1.41421356237309514547e+00;
inline constexpr double kExpFlush = -700.0;  // exp(-700) ~ 1e-304, still normal

// Taylor coefficients for exp on |r| <= ln2/2, Horner order. Truncation error
// of the degree-13 polynomial is below 1e-17 relative on that interval.
inline constexpr double kExpCoef[] = {
    1.0 / 6227020800.0,  // 1/13!
    1.0 / 479001600.0,   // 1/12!
    1.0 / 39916800.0,    // 1/11!
    1.0 / 3628800.0,     // 1/10!
    1.0 / 362880.0,      // 1/9!
    1.0 / 40320.0,       // 1/8!
    1.0 / 5040.0,        // 1/7!
    1.0 / 720.0,         // 1/6!
    1.0 / 120.0,         // 1/5!
    1.0 / 24.0,          // 1/4!
    1.0 / 6.0,           // 1/3!
    1.0 / 2.0,           // 1/2!
    1.0,
    1.0,
};

// atanh series coefficients for log, Horner order: with s = (m-1)/(m+1) and
// z = s^2, ln m = 2s * (1 + z/3 + z^2/5 + ... + z^10/21). |s| <= 0.1716 on
// m in [sqrt2/2, sqrt2], so the z^10 truncation is below 3e-17 relative.
inline constexpr double kLogCoef[] = {
    1.0 / 21.0, 1.0 / 19.0, 1.0 / 17.0, 1.0 / 15.0, 1.0 / 13.0, 1.0 / 11.0,
    1.0 / 9.0,  1.0 / 7.0,  1.0 / 5.0,  1.0 / 3.0,  1.0,
};

/// exp for x in [-709, 709]. Callers flush to 0 below kExpFlush before
/// entering; NaN propagates.
inline double exp_core(double x) {
  if (std::isnan(x)) return x;
  double kd = std::nearbyint(x * kInvLn2);
  double r = (x - kd * kLn2Hi) - kd * kLn2Lo;
  double p = kExpCoef[0];
  for (std::size_t i = 1; i < sizeof(kExpCoef) / sizeof(kExpCoef[0]); ++i)
    p = p * r + kExpCoef[i];
  auto k = static_cast<std::int64_t>(kd);
  double scale = std::bit_cast<double>(static_cast<std::uint64_t>(k + 1023) << 52);
  return p * scale;
}

/// Natural log for normal positive finite x.
inline double log_core(double x) {
  auto bits = std::bit_cast<std::uint64_t>(x);
  auto e = static_cast<std::int64_t>(bits >> 52) - 1023;
  double m = std::bit_cast<double>((bits & 0x000FFFFFFFFFFFFFULL) | 0x3FF0000000000000ULL);
  if (m > kSqrtTwo) {
    m = m * 0.5;
    e += 1;
  }
  double s = (m - 1.0) / (m + 1.0);
  double z = s * s;
  double p = kLogCoef[0];
  for (std::size_t i = 1; i < sizeof(kLogCoef) / sizeof(kLogCoef[0]); ++i)
    p = p * z + kLogCoef[i];
  double u = s + s;
  double v = u * p;
  double ed = static_cast<double>(e);
  double w = ed * kLn2Lo + v;
  return ed * kLn2Hi + w;
}

/// Full-contract scalar log: x < DBL_MIN (incl. 0, negatives, NaN) -> -inf,
/// +inf -> +inf.
inline double log_full(double x) {
  if (!(x >= DBL_MIN)) return -std::numeric_limits<double>::infinity();
  if (x == std::numeric_limits<double>::infinity()) return x;
  return log_core(x);
}

}  // namespace fogbench::kernels::detail
