#include "fogbench/invert.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fogbench/kernels.h"
#include "fogbench/physics.h"

namespace fogbench::invert {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Fit working set: channels flattened over the finite-depth pixels.
struct FitData {
  std::vector<double> d;
  std::vector<double> j[3];
  std::vector<double> im[3];
  // scratch, sized with d
  std::vector<double> t, w, buf, z;
};

struct Eval {
  double g = kInf;  // mean squared channel residual
  Airlight a;
};

/// Profile objective over every finite-depth pixel: model T from beta, then
/// the closed-form least-squares airlight per channel (each channel
/// decouples, so the [0,1] clamp is the exact box-constrained solution).
Eval eval_beta(FitData& fd, double beta) {
  const auto& k = kernels::active_kernels();
  std::size_t m = fd.d.size();
  k.exp_neg_scaled(fd.d.data(), beta, fd.t.data(), m);
  k.affine(fd.t.data(), -1.0, 1.0, fd.w.data(), m);  // w = 1 - t
  double sww = k.dot_masked(fd.w.data(), fd.w.data(), nullptr, m);

  Eval e;
  double a_ch[3] = {0.0, 0.0, 0.0};
  double total = 0.0;
  for (int c = 0; c < 3; ++c) {
    k.compose(fd.j[c].data(), fd.t.data(), 0.0, fd.buf.data(), m);  // J*t
    k.subtract(fd.im[c].data(), fd.buf.data(), fd.z.data(), m);     // I - J*t
    double num = k.dot_masked(fd.w.data(), fd.z.data(), nullptr, m);
    double ac = sww > 0.0 ? std::clamp(num / sww, 0.0, 1.0) : 0.0;
    a_ch[c] = ac;
    k.compose(fd.j[c].data(), fd.t.data(), ac, fd.buf.data(), m);
    total += k.sum_sq_diff_masked(fd.buf.data(), fd.im[c].data(), nullptr, m).sum;
  }
  e.g = total / (3.0 * static_cast<double>(m));
  e.a = Airlight(a_ch[0], a_ch[1], a_ch[2]);
  return e;
}

}  // namespace

FitResult fit_uniform_fog(const RgbImage& foggy, const RgbImage& fogless, const ScalarField& depth,
                          const FitOptions& opt) {
  if (!foggy.same_shape(fogless) || !foggy.same_shape(depth))
    throw std::invalid_argument("fit_uniform_fog: input shapes differ");
  if (!(opt.visibility_lo > 0.0) || !(opt.visibility_hi > opt.visibility_lo) ||
      !(opt.widen >= 1.0))
    throw std::invalid_argument("fit_uniform_fog: bad visibility bracket");
  if (!(opt.golden_tol > 0.0))
    throw std::invalid_argument("fit_uniform_fog: bad tolerance options");

  FitData fd;
  for (std::size_t i = 0; i < depth.size(); ++i) {
    double dv = depth[i];
    if (!(dv >= 0.0)) throw std::domain_error("fit_uniform_fog: depth must be >= 0");
    if (dv == kInf) continue;
    fd.d.push_back(dv);
    for (int c = 0; c < 3; ++c) {
      fd.j[c].push_back(fogless.plane(c)[i]);
      fd.im[c].push_back(foggy.plane(c)[i]);
    }
  }
  if (fd.d.empty())
    throw std::invalid_argument("fit_uniform_fog: no finite-depth pixels to fit");
  std::size_t m = fd.d.size();
  fd.t.resize(m);
  fd.w.resize(m);
  fd.buf.resize(m);
  fd.z.resize(m);

  const double beta_lo = physics::beta_from_visibility(opt.visibility_hi * opt.widen, opt.eps);
  const double beta_hi = physics::beta_from_visibility(opt.visibility_lo / opt.widen, opt.eps);
  auto eval = [&](double b) { return eval_beta(fd, b); };

  // Identifiability probe: a residual that is flat across the whole bracket
  // has no unique minimizer (fog-free image equal to the airlight, or a
  // constant image that any (beta, A) pair can explain).
  {
    double g_lo = kInf, g_hi = -kInf;
    for (int i = 0; i < 9; ++i) {
      double b = beta_lo + (beta_hi - beta_lo) * i / 8.0;
      double g = eval(b).g;
      g_lo = std::min(g_lo, g);
      g_hi = std::max(g_hi, g);
    }
    if (!(g_hi - g_lo > 1e-12 * std::max(1.0, g_hi)))
      throw IdentifiabilityError("fit_uniform_fog: residual is flat in beta over the bracket");
  }

  // Coarse log-spaced scan across the bracket to localize the global basin.
  // The profile objective is smooth but not guaranteed unimodal over three
  // decades of beta, so the golden section is only trusted inside one grid
  // cell on either side of the best sampled point.
  constexpr int kGridCells = 64;
  const double log_ratio = std::log(beta_hi / beta_lo);
  int best_k = 0;
  double best_g = kInf;
  for (int k = 0; k <= kGridCells; ++k) {
    double bk = beta_lo * std::exp(log_ratio * k / static_cast<double>(kGridCells));
    double g = eval(bk).g;
    if (g < best_g) {
      best_g = g;
      best_k = k;
    }
  }
  auto grid_point = [&](int k) {
    return beta_lo * std::exp(log_ratio * k / static_cast<double>(kGridCells));
  };

  constexpr double kGolden = 0.6180339887498949;
  double a = grid_point(std::max(0, best_k - 1));
  double b = grid_point(std::min(kGridCells, best_k + 1));
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  Eval e1 = eval(x1);
  Eval e2 = eval(x2);
  int iters = 0;
  while (b - a > opt.golden_tol && iters < opt.max_golden_iters) {
    if (e1.g <= e2.g) {
      b = x2;
      x2 = x1;
      e2 = e1;
      x1 = b - kGolden * (b - a);
      e1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      e1 = e2;
      x2 = a + kGolden * (b - a);
      e2 = eval(x2);
    }
    ++iters;
    if (opt.objective_trace) opt.objective_trace->push_back(std::min(e1.g, e2.g));
  }
  bool converged = b - a <= opt.golden_tol;
  double beta = e1.g <= e2.g ? x1 : x2;

  // Newton polish on the 1-D profile objective (numeric derivatives); the
  // golden bracket is already ~1e-8 wide, this squeezes beta toward roundoff.
  for (int s = 0; s < opt.max_newton_steps; ++s) {
    double h = 1e-6 * std::max(beta, 1e-3);
    double gp = eval(beta + h).g;
    double gm = eval(beta - h).g;
    double g0 = eval(beta).g;
    double d1 = (gp - gm) / (2.0 * h);
    double d2 = (gp - 2.0 * g0 + gm) / (h * h);
    ++iters;
    if (!(d2 > 0.0)) break;
    double nb = std::clamp(beta - d1 / d2, beta_lo, beta_hi);
    double moved = std::fabs(nb - beta);
    beta = nb;
    if (moved < 1e-15 * beta) break;
  }

  Eval fin = eval(beta);
  FitResult r;
  r.airlight = fin.a;
  r.beta = beta;
  r.visibility = physics::visibility_from_beta(beta, opt.eps);
  r.residual_rms = std::sqrt(fin.g);
  r.iterations = iters;
  r.converged = converged;
  return r;
}

MaskedField transmission_from_images(const RgbImage& foggy, const RgbImage& fogless,
                                     const Airlight& a, double contrast_floor) {
  if (!foggy.same_shape(fogless))
    throw std::invalid_argument("transmission_from_images: image shapes differ");
  if (!(contrast_floor > 0.0))
    throw std::invalid_argument("transmission_from_images: contrast_floor must be > 0");
  MaskedField out{ScalarField(foggy.height(), foggy.width()),
                  Mask(foggy.height(), foggy.width(), 0)};
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    double num = 0.0, den = 0.0;
    for (int c = 0; c < 3; ++c) {
      double dj = fogless.plane(c)[i] - a.channel(c);
      if (std::fabs(dj) > contrast_floor) {
        num += dj * (foggy.plane(c)[i] - a.channel(c));
        den += dj * dj;
      }
    }
    if (den > 0.0) {
      out.values[i] = std::clamp(num / den, 0.0, 1.0);
      out.valid[i] = 1;
    }
  }
  return out;
}

Airlight estimate_airlight_bright(const RgbImage& foggy, double percentile) {
  if (!(percentile > 0.0 && percentile <= 100.0))
    throw std::invalid_argument("estimate_airlight_bright: percentile must be in (0,100]");
  std::size_t n = foggy.pixels();
  std::vector<double> lum(n);
  for (std::size_t i = 0; i < n; ++i)
    lum[i] = (foggy.plane(0)[i] + foggy.plane(1)[i] + foggy.plane(2)[i]) / 3.0;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (lum[a] != lum[b]) return lum[a] > lum[b];
    return a < b;
  });
  auto k = static_cast<std::size_t>(std::llround(static_cast<double>(n) * percentile / 100.0));
  k = std::clamp<std::size_t>(k, 1, n);
  double acc[3] = {0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < k; ++i)
    for (int c = 0; c < 3; ++c) acc[c] += foggy.plane(c)[idx[i]];
  return Airlight(acc[0] / k, acc[1] / k, acc[2] / k);
}

}  // namespace fogbench::invert
