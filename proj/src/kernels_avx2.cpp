// AVX2 kernel variant. Every elementwise path mirrors the scalar reference in
// src/kernels_scalar.cpp operation for operation (same shared exp/log core
// constants, mul-then-add Horner, no FMA), so outputs are bitwise identical.
// Reduction loops use 4-lane accumulators with a fixed horizontal combine;
// they match the scalar reference to roundoff, not bitwise.
//
// This translation unit is compiled with -mavx2 but must stay safe to *load*
// on any CPU: no namespace-scope vector objects (their initializers would run
// AVX instructions at startup). Dispatch happens in kernels_dispatch.cpp.

#include "fogbench/kernels.h"

#if defined(__x86_64__) && defined(__AVX2__)

#include <immintrin.h>

#include <cfloat>
#include <cmath>
#include <cstring>
#include <limits>

#include "fogbench/kernels_math.h"

namespace fogbench::kernels {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMagic = 0x1.8p52;  // 1.5 * 2^52, int<->double conversion pivot

inline __m256d exp_lanes(__m256d y) {
  const __m256d magic = _mm256_set1_pd(kMagic);
  __m256d kd = _mm256_round_pd(_mm256_mul_pd(y, _mm256_set1_pd(detail::kInvLn2)),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_sub_pd(_mm256_sub_pd(y, _mm256_mul_pd(kd, _mm256_set1_pd(detail::kLn2Hi))),
                            _mm256_mul_pd(kd, _mm256_set1_pd(detail::kLn2Lo)));
  __m256d p = _mm256_set1_pd(detail::kExpCoef[0]);
  for (std::size_t i = 1; i < sizeof(detail::kExpCoef) / sizeof(double); ++i)
    p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(detail::kExpCoef[i]));
  __m256i ki =
      _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(kd, magic)), _mm256_castpd_si256(magic));
  __m256i eb = _mm256_slli_epi64(_mm256_add_epi64(ki, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(eb));
}

inline __m256d log_lanes(__m256d x) {
  const __m256d magic = _mm256_set1_pd(kMagic);
  __m256i bits = _mm256_castpd_si256(x);
  __m256i e = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(1023));
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                      _mm256_set1_epi64x(0x3FF0000000000000LL)));
  __m256d gt = _mm256_cmp_pd(m, _mm256_set1_pd(detail::kSqrtTwo), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), gt);
  e = _mm256_add_epi64(e, _mm256_and_si256(_mm256_castpd_si256(gt), _mm256_set1_epi64x(1)));
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  __m256d z = _mm256_mul_pd(s, s);
  __m256d p = _mm256_set1_pd(detail::kLogCoef[0]);
  for (std::size_t i = 1; i < sizeof(detail::kLogCoef) / sizeof(double); ++i)
    p = _mm256_add_pd(_mm256_mul_pd(p, z), _mm256_set1_pd(detail::kLogCoef[i]));
  __m256d v = _mm256_mul_pd(_mm256_add_pd(s, s), p);
  __m256d ed = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_add_epi64(e, _mm256_castpd_si256(magic))), magic);
  __m256d w = _mm256_add_pd(_mm256_mul_pd(ed, _mm256_set1_pd(detail::kLn2Lo)), v);
  return _mm256_add_pd(_mm256_mul_pd(ed, _mm256_set1_pd(detail::kLn2Hi)), w);
}

inline __m256d mask_from_bytes(const std::uint8_t* m) {
  int w = 0;
  std::memcpy(&w, m, 4);
  __m256i q = _mm256_cvtepi8_epi64(_mm_cvtsi32_si128(w));
  return _mm256_castsi256_pd(_mm256_cmpgt_epi64(q, _mm256_setzero_si256()));
}

inline void bytes_from_movemask(std::uint8_t* m, int bits) {
  for (int l = 0; l < 4; ++l) m[l] = static_cast<std::uint8_t>((bits >> l) & 1);
}

inline double hsum(__m256d v) {
  __m128d s2 = _mm_add_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
  return _mm_cvtsd_f64(_mm_add_sd(s2, _mm_unpackhi_pd(s2, s2)));
}

inline double hmin(__m256d v) {
  __m128d s2 = _mm_min_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
  return _mm_cvtsd_f64(_mm_min_sd(s2, _mm_unpackhi_pd(s2, s2)));
}

inline double hmax(__m256d v) {
  __m128d s2 = _mm_max_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
  return _mm_cvtsd_f64(_mm_max_sd(s2, _mm_unpackhi_pd(s2, s2)));
}

void e_exp_neg_scaled(const double* x, double scale, double* out, std::size_t n) {
  const __m256d ns = _mm256_set1_pd(-scale);
  const __m256d inf = _mm256_set1_pd(kInf);
  const __m256d edge = _mm256_set1_pd(detail::kExpFlush);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d y = _mm256_mul_pd(ns, xv);
    __m256d flush = _mm256_or_pd(_mm256_cmp_pd(xv, inf, _CMP_EQ_OQ),
                                 _mm256_cmp_pd(y, edge, _CMP_LE_OQ));
    _mm256_storeu_pd(out + i, _mm256_andnot_pd(flush, exp_lanes(y)));
  }
  double nss = -scale;
  for (; i < n; ++i) {
    if (x[i] == kInf) {
      out[i] = 0.0;
      continue;
    }
    double y = nss * x[i];
    out[i] = (y <= detail::kExpFlush) ? 0.0 : detail::exp_core(y);
  }
}

void e_log_nat(const double* x, double* out, std::size_t n) {
  const __m256d lim = _mm256_set1_pd(DBL_MIN);
  const __m256d inf = _mm256_set1_pd(kInf);
  const __m256d ninf = _mm256_set1_pd(-kInf);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d ok = _mm256_cmp_pd(xv, lim, _CMP_GE_OQ);
    __m256d r = _mm256_blendv_pd(ninf, log_lanes(xv), ok);
    r = _mm256_blendv_pd(r, inf, _mm256_cmp_pd(xv, inf, _CMP_EQ_OQ));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = detail::log_full(x[i]);
}

void e_affine(const double* x, double mul, double add, double* out, std::size_t n) {
  const __m256d mv = _mm256_set1_pd(mul);
  const __m256d av = _mm256_set1_pd(add);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(mv, _mm256_loadu_pd(x + i)), av));
  for (; i < n; ++i) out[i] = mul * x[i] + add;
}

void e_subtract(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void e_compose(const double* j, const double* t, double a, double* out, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d tv = _mm256_loadu_pd(t + i);
    __m256d jt = _mm256_mul_pd(_mm256_loadu_pd(j + i), tv);
    _mm256_storeu_pd(out + i, _mm256_add_pd(jt, _mm256_mul_pd(av, _mm256_sub_pd(one, tv))));
  }
  for (; i < n; ++i) out[i] = j[i] * t[i] + a * (1.0 - t[i]);
}

void e_defog(const double* im, const double* t, double a, double* out, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_add_pd(
        _mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(im + i), av), _mm256_loadu_pd(t + i)), av);
    v = _mm256_max_pd(v, zero);  // NaN in v selects the second operand
    v = _mm256_min_pd(v, one);
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) {
    double v = (im[i] - a) / t[i] + a;
    v = (v > 0.0) ? v : 0.0;
    v = (v < 1.0) ? v : 1.0;
    out[i] = v;
  }
}

void e_visibility(const double* d, const double* t, double ln_eps, double* v, std::uint8_t* valid,
                  std::size_t n) {
  const __m256d lim = _mm256_set1_pd(DBL_MIN);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d le = _mm256_set1_pd(ln_eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d tv = _mm256_loadu_pd(t + i);
    __m256d ok = _mm256_and_pd(_mm256_cmp_pd(tv, lim, _CMP_GE_OQ),
                               _mm256_cmp_pd(tv, one, _CMP_LT_OQ));
    __m256d vall = _mm256_div_pd(_mm256_mul_pd(le, _mm256_loadu_pd(d + i)), log_lanes(tv));
    _mm256_storeu_pd(v + i, _mm256_and_pd(vall, ok));
    bytes_from_movemask(valid + i, _mm256_movemask_pd(ok));
  }
  for (; i < n; ++i) {
    bool ok = t[i] >= DBL_MIN && t[i] < 1.0;
    if (ok) {
      v[i] = ln_eps * d[i] / detail::log_core(t[i]);
      valid[i] = 1;
    } else {
      v[i] = 0.0;
      valid[i] = 0;
    }
  }
}

void e_reciprocal(const double* x, double* out, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_div_pd(one, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = 1.0 / x[i];
}

void e_mask_gt(const double* x, double thr, std::uint8_t* m, std::size_t n) {
  const __m256d tv = _mm256_set1_pd(thr);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    bytes_from_movemask(m + i,
                        _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + i), tv, _CMP_GT_OQ)));
  for (; i < n; ++i) m[i] = x[i] > thr ? 1 : 0;
}

void e_mask_ge(const double* x, double thr, std::uint8_t* m, std::size_t n) {
  const __m256d tv = _mm256_set1_pd(thr);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    bytes_from_movemask(m + i,
                        _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + i), tv, _CMP_GE_OQ)));
  for (; i < n; ++i) m[i] = x[i] >= thr ? 1 : 0;
}

void e_mask_and_lt(const double* x, double thr, std::uint8_t* m, std::size_t n) {
  const __m256d tv = _mm256_set1_pd(thr);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    int bits = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + i), tv, _CMP_LT_OQ));
    for (int l = 0; l < 4; ++l) m[i + l] = (m[i + l] && ((bits >> l) & 1)) ? 1 : 0;
  }
  for (; i < n; ++i) m[i] = (m[i] && x[i] < thr) ? 1 : 0;
}

double e_sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

SumCount e_sum_count_masked(const double* x, const std::uint8_t* valid, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  SumCount r;
  std::size_t i = 0;
  if (valid) {
    for (; i + 4 <= n; i += 4) {
      __m256d mk = mask_from_bytes(valid + i);
      acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_loadu_pd(x + i), mk));
      r.count += __builtin_popcount(_mm256_movemask_pd(mk));
    }
  } else {
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    r.count = static_cast<std::int64_t>(i);
  }
  r.sum = hsum(acc);
  for (; i < n; ++i) {
    if (valid && !valid[i]) continue;
    r.sum += x[i];
    r.count += 1;
  }
  return r;
}

SumCount e_sum_sq_diff_masked(const double* a, const double* b, const std::uint8_t* valid,
                              std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  SumCount r;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    __m256d sq = _mm256_mul_pd(d, d);
    if (valid) {
      __m256d mk = mask_from_bytes(valid + i);
      sq = _mm256_and_pd(sq, mk);
      r.count += __builtin_popcount(_mm256_movemask_pd(mk));
    } else {
      r.count += 4;
    }
    acc = _mm256_add_pd(acc, sq);
  }
  r.sum = hsum(acc);
  for (; i < n; ++i) {
    if (valid && !valid[i]) continue;
    double d = a[i] - b[i];
    r.sum += d * d;
    r.count += 1;
  }
  return r;
}

SumCount e_sum_abs_diff_masked(const double* a, const double* b, const std::uint8_t* valid,
                               std::size_t n) {
  const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));
  __m256d acc = _mm256_setzero_pd();
  SumCount r;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_and_pd(absmask,
                              _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    if (valid) {
      __m256d mk = mask_from_bytes(valid + i);
      d = _mm256_and_pd(d, mk);
      r.count += __builtin_popcount(_mm256_movemask_pd(mk));
    } else {
      r.count += 4;
    }
    acc = _mm256_add_pd(acc, d);
  }
  r.sum = hsum(acc);
  for (; i < n; ++i) {
    if (valid && !valid[i]) continue;
    r.sum += std::fabs(a[i] - b[i]);
    r.count += 1;
  }
  return r;
}

double e_dot_masked(const double* a, const double* b, const std::uint8_t* valid, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    if (valid) p = _mm256_and_pd(p, mask_from_bytes(valid + i));
    acc = _mm256_add_pd(acc, p);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    if (valid && !valid[i]) continue;
    s += a[i] * b[i];
  }
  return s;
}

MinMax e_min_max_masked(const double* x, const std::uint8_t* valid, std::size_t n) {
  const __m256d pinf = _mm256_set1_pd(kInf);
  const __m256d ninf = _mm256_set1_pd(-kInf);
  __m256d lo = pinf;
  __m256d hi = ninf;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    if (valid) {
      __m256d mk = mask_from_bytes(valid + i);
      lo = _mm256_min_pd(lo, _mm256_blendv_pd(pinf, xv, mk));
      hi = _mm256_max_pd(hi, _mm256_blendv_pd(ninf, xv, mk));
    } else {
      lo = _mm256_min_pd(lo, xv);
      hi = _mm256_max_pd(hi, xv);
    }
  }
  MinMax r{hmin(lo), hmax(hi)};
  for (; i < n; ++i) {
    if (valid && !valid[i]) continue;
    r.lo = (x[i] < r.lo) ? x[i] : r.lo;
    r.hi = (x[i] > r.hi) ? x[i] : r.hi;
  }
  return r;
}

constexpr Kernels kAvx2Table = {
    "avx2",        e_exp_neg_scaled, e_log_nat,     e_affine,
    e_subtract,    e_compose,        e_defog,       e_visibility,
    e_reciprocal,  e_mask_gt,        e_mask_ge,     e_mask_and_lt,
    e_sum,         e_sum_count_masked, e_sum_sq_diff_masked, e_sum_abs_diff_masked,
    e_dot_masked,  e_min_max_masked,
};

}  // namespace

const Kernels* avx2_table_impl() { return &kAvx2Table; }

}  // namespace fogbench::kernels

#else  // non-x86 build or AVX2 disabled: the NEON variant would slot in here.

namespace fogbench::kernels {
const Kernels* avx2_table_impl() { return nullptr; }
}  // namespace fogbench::kernels

#endif
