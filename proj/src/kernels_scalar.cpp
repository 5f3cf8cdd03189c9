#include <cfloat>
#include <cmath>
#include <limits>

#include "fogbench/kernels.h"
#include "fogbench/kernels_math.h"

// Reference kernels. Plain loops, one statement per floating-point operation
// where ordering matters; the AVX2 variant mirrors these exactly.

namespace fogbench::kernels {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void k_exp_neg_scaled(const double* x, double scale, double* out, std::size_t n) {
  double ns = -scale;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == kInf) {
      out[i] = 0.0;
      continue;
    }
    double y = ns * x[i];
    out[i] = (y <= detail::kExpFlush) ? 0.0 : detail::exp_core(y);
  }
}

void k_log_nat(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = detail::log_full(x[i]);
}

void k_affine(const double* x, double mul, double add, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = mul * x[i] + add;
}

void k_subtract(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void k_compose(const double* j, const double* t, double a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = j[i] * t[i] + a * (1.0 - t[i]);
}

void k_defog(const double* im, const double* t, double a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = (im[i] - a) / t[i] + a;
    v = (v > 0.0) ? v : 0.0;  // NaN lands on 0, same as the SIMD max/min pair
    v = (v < 1.0) ? v : 1.0;
    out[i] = v;
  }
}

void k_visibility(const double* d, const double* t, double ln_eps, double* v, std::uint8_t* valid,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    bool ok = t[i] >= DBL_MIN && t[i] < 1.0;
    if (ok) {
      double lg = detail::log_core(t[i]);
      v[i] = ln_eps * d[i] / lg;
      valid[i] = 1;
    } else {
      v[i] = 0.0;
      valid[i] = 0;
    }
  }
}

void k_reciprocal(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / x[i];
}

void k_mask_gt(const double* x, double thr, std::uint8_t* m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) m[i] = x[i] > thr ? 1 : 0;
}

void k_mask_ge(const double* x, double thr, std::uint8_t* m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) m[i] = x[i] >= thr ? 1 : 0;
}

void k_mask_and_lt(const double* x, double thr, std::uint8_t* m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) m[i] = (m[i] && x[i] < thr) ? 1 : 0;
}

double k_sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

SumCount k_sum_count_masked(const double* x, const std::uint8_t* valid, std::size_t n) {
  SumCount r;
  for (std::size_t i = 0; i < n; ++i) {
    if (valid && !valid[i]) continue;
    r.sum += x[i];
    r.count += 1;
  }
  return r;
}

SumCount k_sum_sq_diff_masked(const double* a, const double* b, const std::uint8_t* valid,
                              std::size_t n) {
  SumCount r;
  for (std::size_t i = 0; i < n; ++i) {
    if (valid && !valid[i]) continue;
    double d = a[i] - b[i];
    r.sum += d * d;
    r.count += 1;
  }
  return r;
}

SumCount k_sum_abs_diff_masked(const double* a, const double* b, const std::uint8_t* valid,
                               std::size_t n) {
  SumCount r;
  for (std::size_t i = 0; i < n; ++i) {
    if (valid && !valid[i]) continue;
    r.sum += std::fabs(a[i] - b[i]);
    r.count += 1;
  }
  return r;
}

double k_dot_masked(const double* a, const double* b, const std::uint8_t* valid, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (valid && !valid[i]) continue;
    s += a[i] * b[i];
  }
  return s;
}

MinMax k_min_max_masked(const double* x, const std::uint8_t* valid, std::size_t n) {
  MinMax r{kInf, -kInf};
  for (std::size_t i = 0; i < n; ++i) {
    if (valid && !valid[i]) continue;
    r.lo = (x[i] < r.lo) ? x[i] : r.lo;
    r.hi = (x[i] > r.hi) ? x[i] : r.hi;
  }
  return r;
}

constexpr Kernels kScalarTable = {
    "scalar",        k_exp_neg_scaled, k_log_nat,     k_affine,
    k_subtract,      k_compose,        k_defog,       k_visibility,
    k_reciprocal,    k_mask_gt,        k_mask_ge,     k_mask_and_lt,
    k_sum,           k_sum_count_masked, k_sum_sq_diff_masked, k_sum_abs_diff_masked,
    k_dot_masked,    k_min_max_masked,
};

}  // namespace

const Kernels& scalar_kernels() { return kScalarTable; }

}  // namespace fogbench::kernels
