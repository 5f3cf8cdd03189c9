#pragma once

#include <cstddef>
#include <cstdint>

namespace fogbench::kernels {

struct SumCount {
  double sum = 0.0;
  std::int64_t count = 0;
};

struct MinMax {
  double lo = 0.0;
  double hi = 0.0;
};

/// Hot inner loops, provided as interchangeable implementations.
///
/// Elementwise entries produce bitwise-identical outputs across
/// implementations: they share one exp/log core, every floating-point
/// operation is mirrored in the same order, and the build disables
/// FP contraction. Reductions accumulate in an implementation-defined
/// order (lane-parallel in the SIMD variants), so they are equivalence
/// tested to a relative tolerance instead; masked counts are exact.
struct Kernels {
  const char* name;

  // elementwise
  // out = exp(-scale * x); x = +inf or exponent <= -700 flushes to +0
  void (*exp_neg_scaled)(const double* x, double scale, double* out, std::size_t n);
  // natural log; x < DBL_MIN (incl. 0, negatives, NaN) -> -inf, +inf -> +inf
  void (*log_nat)(const double* x, double* out, std::size_t n);
  // out = mul * x + add
  void (*affine)(const double* x, double mul, double add, double* out, std::size_t n);
  // out = a - b
  void (*subtract)(const double* a, const double* b, double* out, std::size_t n);
  // out = j*t + a*(1 - t)
  void (*compose)(const double* j, const double* t, double a, double* out, std::size_t n);
  // out = clamp((i - a)/t + a, 0, 1); non-finite intermediates clamp to 0
  void (*defog)(const double* i, const double* t, double a, double* out, std::size_t n);
  // v = ln_eps * d / ln(t) where t in [DBL_MIN, 1), else v = 0 and valid = 0
  void (*visibility)(const double* d, const double* t, double ln_eps, double* v,
                     std::uint8_t* valid, std::size_t n);
  // out = 1/x; +inf -> +0
  void (*reciprocal)(const double* x, double* out, std::size_t n);
  // m = x > thr
  void (*mask_gt)(const double* x, double thr, std::uint8_t* m, std::size_t n);
  // m = x >= thr
  void (*mask_ge)(const double* x, double thr, std::uint8_t* m, std::size_t n);
  // m = m && (x < thr)
  void (*mask_and_lt)(const double* x, double thr, std::uint8_t* m, std::size_t n);

  // reductions; valid == nullptr means every element participates
  double (*sum)(const double* x, std::size_t n);
  SumCount (*sum_count_masked)(const double* x, const std::uint8_t* valid, std::size_t n);
  SumCount (*sum_sq_diff_masked)(const double* a, const double* b, const std::uint8_t* valid,
                                 std::size_t n);
  SumCount (*sum_abs_diff_masked)(const double* a, const double* b, const std::uint8_t* valid,
                                  std::size_t n);
  double (*dot_masked)(const double* a, const double* b, const std::uint8_t* valid, std::size_t n);
  // {+inf, -inf} when no element is valid
  MinMax (*min_max_masked)(const double* x, const std::uint8_t* valid, std::size_t n);
};

const Kernels& scalar_kernels();

/// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const Kernels* avx2_kernels();

/// Best available implementation. FOGBENCH_KERNELS=scalar|avx2 overrides the
/// choice (the avx2 request falls back to scalar when unavailable).
const Kernels& active_kernels();

}  // namespace fogbench::kernels
