#include "fogbench/losses.h"

#include <cfloat>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "fogbench/kernels.h"
#include "fogbench/kernels_math.h"

namespace fogbench::losses {
namespace {

constexpr int kWin = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 1e-4;  // (0.01 * L)^2 with L = 1
constexpr double kC2 = 9e-4;  // (0.03 * L)^2

const std::array<double, kWin>& gauss_window() {
  static const std::array<double, kWin> g = [] {
    std::array<double, kWin> w{};
    double s = 0.0;
    for (int i = 0; i < kWin; ++i) {
      double d = i - (kWin - 1) / 2;
      w[i] = std::exp(-(d * d) / (2.0 * kSigma * kSigma));
      s += w[i];
    }
    for (auto& v : w) v /= s;
    return w;
  }();
  return g;
}

/// Separable windowed mean, fully-covered positions only:
/// (h, w) -> (h - kWin + 1, w - kWin + 1).
ScalarField window_mean(const ScalarField& x) {
  const auto& g = gauss_window();
  int h = x.height(), w = x.width();
  ScalarField hconv(h, w - kWin + 1);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c + kWin <= w; ++c) {
      double s = 0.0;
      for (int k = 0; k < kWin; ++k) s += g[k] * x.at(r, c + k);
      hconv.at(r, c) = s;
    }
  ScalarField out(h - kWin + 1, w - kWin + 1);
  for (int r = 0; r + kWin <= h; ++r)
    for (int c = 0; c < out.width(); ++c) {
      double s = 0.0;
      for (int k = 0; k < kWin; ++k) s += g[k] * hconv.at(r + k, c);
      out.at(r, c) = s;
    }
  return out;
}

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.height(), a.width());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

void require_shape(const ScalarField& a, const ScalarField& b, const char* who) {
  if (!a.same_shape(b)) throw std::invalid_argument(std::string(who) + ": field shapes differ");
}

double rmse_fields(const double* a, const double* b, std::size_t n) {
  auto sc = kernels::active_kernels().sum_sq_diff_masked(a, b, nullptr, n);
  return std::sqrt(sc.sum / static_cast<double>(sc.count));
}

}  // namespace

void LossWeights::validate() const {
  for (double v : {airlight, transmission, disparity, defog, visibility, l1, ssim, smooth})
    if (!(v >= 0.0)) throw std::invalid_argument("LossWeights: weights must be >= 0");
}

double loss_airlight(const Airlight& est, const Airlight& gt) {
  double s = 0.0;
  for (int c = 0; c < 3; ++c) {
    double d = est.channel(c) - gt.channel(c);
    s += d * d;
  }
  return std::sqrt(s / 3.0);
}

std::array<double, 3> loss_airlight_grad(const Airlight& est, const Airlight& gt) {
  double l = loss_airlight(est, gt);
  std::array<double, 3> g{};
  if (l == 0.0) return g;
  for (int c = 0; c < 3; ++c) g[c] = (est.channel(c) - gt.channel(c)) / (3.0 * l);
  return g;
}

double loss_transmission(const ScalarField& est, const ScalarField& gt) {
  require_shape(est, gt, "loss_transmission");
  return rmse_fields(est.data(), gt.data(), est.size());
}

ScalarField loss_transmission_grad(const ScalarField& est, const ScalarField& gt) {
  require_shape(est, gt, "loss_transmission_grad");
  ScalarField g(est.height(), est.width());
  double l = loss_transmission(est, gt);
  if (l == 0.0) return g;
  double n = static_cast<double>(est.size());
  for (std::size_t i = 0; i < est.size(); ++i) g[i] = (est[i] - gt[i]) / (n * l);
  return g;
}

double loss_defog(const RgbImage& est, const RgbImage& gt) {
  if (!est.same_shape(gt)) throw std::invalid_argument("loss_defog: image shapes differ");
  double s = 0.0;
  for (int c = 0; c < 3; ++c) {
    auto sc = kernels::active_kernels().sum_sq_diff_masked(est.plane(c), gt.plane(c), nullptr,
                                                           est.pixels());
    s += sc.sum;
  }
  return std::sqrt(s / (3.0 * static_cast<double>(est.pixels())));
}

RgbImage loss_defog_grad(const RgbImage& est, const RgbImage& gt) {
  if (!est.same_shape(gt)) throw std::invalid_argument("loss_defog_grad: image shapes differ");
  RgbImage g(est.height(), est.width());
  double l = loss_defog(est, gt);
  if (l == 0.0) return g;
  double n = 3.0 * static_cast<double>(est.pixels());
  for (int c = 0; c < 3; ++c) {
    const double* e = est.plane(c);
    const double* t = gt.plane(c);
    double* o = g.plane(c);
    for (std::size_t i = 0; i < est.pixels(); ++i) o[i] = (e[i] - t[i]) / (n * l);
  }
  return g;
}

double ssim(const ScalarField& x, const ScalarField& y) {
  require_shape(x, y, "ssim");
  if (x.height() < kWin || x.width() < kWin)
    throw std::invalid_argument("ssim: field smaller than the 11x11 window");
  ScalarField mx = window_mean(x);
  ScalarField my = window_mean(y);
  ScalarField mxx = window_mean(hadamard(x, x));
  ScalarField myy = window_mean(hadamard(y, y));
  ScalarField mxy = window_mean(hadamard(x, y));
  double acc = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    double vx = mxx[i] - mx[i] * mx[i];
    double vy = myy[i] - my[i] * my[i];
    double cxy = mxy[i] - mx[i] * my[i];
    double num = (2.0 * mx[i] * my[i] + kC1) * (2.0 * cxy + kC2);
    double den = (mx[i] * mx[i] + my[i] * my[i] + kC1) * (vx + vy + kC2);
    acc += num / den;
  }
  return acc / static_cast<double>(mx.size());
}

double l1_mean(const ScalarField& est, const ScalarField& gt) {
  require_shape(est, gt, "l1_mean");
  auto sc = kernels::active_kernels().sum_abs_diff_masked(est.data(), gt.data(), nullptr,
                                                          est.size());
  return sc.sum / static_cast<double>(sc.count);
}

ScalarField l1_mean_grad(const ScalarField& est, const ScalarField& gt) {
  require_shape(est, gt, "l1_mean_grad");
  ScalarField g(est.height(), est.width());
  double n = static_cast<double>(est.size());
  for (std::size_t i = 0; i < est.size(); ++i) {
    double d = est[i] - gt[i];
    g[i] = (d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0)) / n;
  }
  return g;
}

double smoothness(const ScalarField& disparity, const RgbImage& guide) {
  if (!guide.same_shape(disparity))
    throw std::invalid_argument("smoothness: disparity and guide shapes differ");
  int h = disparity.height(), w = disparity.width();
  double acc = 0.0;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      if (c + 1 < w) {
        double gj = 0.0;
        for (int ch = 0; ch < 3; ++ch)
          gj += std::fabs(guide.at(r, c + 1, ch) - guide.at(r, c, ch));
        acc += std::exp(-gj / 3.0) * std::fabs(disparity.at(r, c + 1) - disparity.at(r, c));
      }
      if (r + 1 < h) {
        double gj = 0.0;
        for (int ch = 0; ch < 3; ++ch)
          gj += std::fabs(guide.at(r + 1, c, ch) - guide.at(r, c, ch));
        acc += std::exp(-gj / 3.0) * std::fabs(disparity.at(r + 1, c) - disparity.at(r, c));
      }
    }
  return acc / (static_cast<double>(h) * w);
}

double loss_disparity(const ScalarField& est, const ScalarField& gt, const RgbImage& guide,
                      const LossWeights& w) {
  w.validate();
  require_shape(est, gt, "loss_disparity");
  return w.l1 * l1_mean(est, gt) + w.ssim * (1.0 - ssim(est, gt)) / 2.0 +
         w.smooth * smoothness(est, guide);
}

double loss_visibility(const ScalarField& dbar_est, const ScalarField& t_est,
                       const ScalarField& dbar_gt, const ScalarField& t_gt) {
  require_shape(dbar_est, t_est, "loss_visibility");
  require_shape(dbar_est, dbar_gt, "loss_visibility");
  require_shape(dbar_est, t_gt, "loss_visibility");
  double acc = 0.0;
  std::int64_t n = 0;
  for (std::size_t i = 0; i < dbar_est.size(); ++i) {
    if (!(t_est[i] >= DBL_MIN) || !(t_gt[i] >= DBL_MIN)) continue;
    double e = dbar_est[i] * kernels::detail::log_core(t_est[i]);
    double g = dbar_gt[i] * kernels::detail::log_core(t_gt[i]);
    acc += std::fabs(e - g);
    n += 1;
  }
  if (n == 0) throw std::invalid_argument("loss_visibility: no pixel with positive transmission");
  return acc / static_cast<double>(n);
}

ScalarField loss_visibility_grad(const ScalarField& dbar_est, const ScalarField& t_est,
                                 const ScalarField& dbar_gt, const ScalarField& t_gt) {
  require_shape(dbar_est, t_est, "loss_visibility_grad");
  require_shape(dbar_est, dbar_gt, "loss_visibility_grad");
  require_shape(dbar_est, t_gt, "loss_visibility_grad");
  ScalarField grad(dbar_est.height(), dbar_est.width());
  std::int64_t n = 0;
  for (std::size_t i = 0; i < dbar_est.size(); ++i)
    if (t_est[i] >= DBL_MIN && t_gt[i] >= DBL_MIN) n += 1;
  if (n == 0)
    throw std::invalid_argument("loss_visibility_grad: no pixel with positive transmission");
  for (std::size_t i = 0; i < dbar_est.size(); ++i) {
    if (!(t_est[i] >= DBL_MIN) || !(t_gt[i] >= DBL_MIN)) continue;
    double lt = kernels::detail::log_core(t_est[i]);
    double diff = dbar_est[i] * lt - dbar_gt[i] * kernels::detail::log_core(t_gt[i]);
    double sg = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
    grad[i] = sg * lt / static_cast<double>(n);
  }
  return grad;
}

double total_loss(const LossTerms& t, const LossWeights& w) {
  w.validate();
  return w.airlight * t.airlight + w.transmission * t.transmission + w.disparity * t.disparity +
         w.defog * t.defog + w.visibility * t.visibility;
}

ScalarField numeric_gradient(const std::function<double(const ScalarField&)>& f,
                             const ScalarField& at, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("numeric_gradient: h must be > 0");
  ScalarField g(at.height(), at.width());
  ScalarField probe = at;
  for (std::size_t i = 0; i < at.size(); ++i) {
    probe[i] = at[i] + h;
    double fp = f(probe);
    probe[i] = at[i] - h;
    double fm = f(probe);
    probe[i] = at[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace fogbench::losses
