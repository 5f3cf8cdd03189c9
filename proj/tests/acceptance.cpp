// Acceptance gate: nine release criteria, one PASS/FAIL line each.
// Exit status is the number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "fogbench/estimate.h"
#include "fogbench/field.h"
#include "fogbench/invert.h"
#include "fogbench/losses.h"
#include "fogbench/metrics.h"
#include "fogbench/physics.h"
#include "fogbench/rng.h"
#include "fogbench/scenes.h"
#include "fogbench/synth.h"

using namespace fogbench;

namespace {

int g_failures = 0;

void report(int n, bool ok, const char* fmt, ...) {
  char buf[768];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", n, buf);
  if (!ok) ++g_failures;
}

synth::FogSample sample_for(int scene_idx, int variant, std::uint64_t seed, int h = 64,
                            int w = 64) {
  auto sc = scenes::make_scene(scene_idx, h, w);
  auto rs = synth::sample_stream(seed, sc.id, variant);
  auto s = synth::make_sample(sc.fogless, sc.depth, rs, Epsilon(0.05));
  s.scene_id = sc.id;
  s.variant_id = variant;
  return s;
}

// --- 1: image-wise visibility recovers the generator parameter -------------

void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  double max_rel = 0.0;
  int count = 0;
  for (int si = 0; si < 20; ++si)
    for (int vi = 0; vi < 5; ++vi) {
      auto s = sample_for(si, vi, 11);
      auto v = vis::pixel_visibility(s.transmission, s.depth, Epsilon(s.epsilon));
      double got = vis::image_visibility(v, s.transmission, vis::EstimationConfig{});
      max_rel = std::max(max_rel, std::fabs(got - s.visibility) / s.visibility);
      ++count;
    }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(1, count == 100 && max_rel < 1e-3 && secs < 5.0,
         "visibility recovered on %d 64x64 samples, max rel err %.3g (need < 1e-3), %.2f s "
         "(need < 5 s)",
         count, max_rel, secs);
}

// --- 2: defog inverts synthesize wherever transmission is usable -----------

void criterion2() {
  double max_err = 0.0;
  bool valid_ok = true;
  for (int si = 0; si < 10; ++si)
    for (int vi = 0; vi < 5; ++vi) {
      auto s = sample_for(si, vi, 12);
      auto res = physics::defog(s.foggy, s.airlight, s.transmission, 0.01);
      for (std::size_t i = 0; i < s.transmission.size(); ++i) {
        if (!(s.transmission[i] >= 0.01)) continue;
        if (!res.valid[i]) valid_ok = false;
        for (int c = 0; c < 3; ++c)
          max_err = std::max(
              max_err, std::fabs(res.image.plane(c)[i] - s.fogless.plane(c)[i]));
      }
    }
  report(2, valid_ok && max_err < 1e-6,
         "defog(synthesize(J)) on 50 samples: max abs channel err %.3g where T >= 0.01 "
         "(need < 1e-6)",
         max_err);
}

// --- 3: contrast of a black object equals the transmission -----------------

void criterion3() {
  auto sc = scenes::make_scene(3, 48, 64);
  for (int r = 10; r < 34; ++r)
    for (int c = 5; c < 40; ++c)
      for (int ch = 0; ch < 3; ++ch) sc.fogless.at(r, c, ch) = 0.0;
  auto rs = synth::sample_stream(13, sc.id, 0);
  auto s = synth::make_sample(sc.fogless, sc.depth, rs, Epsilon(0.05));

  double max_dev = 0.0;
  for (int r = 10; r < 34; ++r)
    for (int c = 5; c < 40; ++c) {
      double t = s.transmission.at(r, c);
      for (int ch = 0; ch < 3; ++ch) {
        double ctr = physics::contrast(s.foggy.at(r, c, ch), s.airlight.channel(ch));
        max_dev = std::max(max_dev, std::fabs(std::fabs(ctr) - t));
      }
    }
  report(3, max_dev <= 1e-9,
         "black patch: | |contrast| - T | <= %.3g at every pixel (need <= 1e-9)", max_dev);
}

// --- 4: model inversion, exact and under noise -----------------------------

void criterion4() {
  double w_beta = 0.0, w_air = 0.0, w_rms = 0.0;
  for (int si = 0; si < 10; ++si) {
    auto s = sample_for(si, 0, 14);
    auto fit = invert::fit_uniform_fog(s.foggy, s.fogless, s.depth);
    w_beta = std::max(w_beta, std::fabs(fit.beta - s.beta) / s.beta);
    for (int c = 0; c < 3; ++c)
      w_air = std::max(w_air, std::fabs(fit.airlight.channel(c) - s.airlight.channel(c)) /
                                  s.airlight.channel(c));
    w_rms = std::max(w_rms, fit.residual_rms);
  }
  bool clean_ok = w_beta < 1e-6 && w_air < 1e-6 && w_rms < 1e-8;

  double sum_rel = 0.0;
  int trials = 0;
  for (int si = 0; si < 20; ++si)
    for (int vi = 0; vi < 5; ++vi) {
      auto s = sample_for(si, vi, 15);
      auto ns = synth::noise_stream(15, s.scene_id, vi);
      RgbImage noisy = synth::add_noise(s.foggy, 0.01, ns);
      auto fit = invert::fit_uniform_fog(noisy, s.fogless, s.depth);
      sum_rel += std::fabs(fit.visibility - s.visibility) / s.visibility;
      ++trials;
    }
  double mean_rel = sum_rel / trials;
  report(4, clean_ok && trials == 100 && mean_rel < 0.05,
         "noise-free fits: beta rel %.3g, airlight rel %.3g, residual rms %.3g "
         "(need < 1e-6, 1e-6, 1e-8); sigma=0.01: mean visibility AbsRel %.4f over %d trials "
         "(need < 0.05)",
         w_beta, w_air, w_rms, mean_rel, trials);
}

// --- 5: regression metrics against brute force -----------------------------

void criterion5() {
  rng::Stream s(16);
  double max_diff = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    int h = 1 + static_cast<int>(s.below(6));
    int w = 1 + static_cast<int>(s.below(6));
    ScalarField gt(h, w), pred(h, w);
    Mask mask(h, w);
    for (std::size_t i = 0; i < gt.size(); ++i) {
      gt[i] = s.uniform(0.5, 500.0);
      pred[i] = s.uniform(0.5, 500.0);
      mask[i] = s.below(10) < 7 ? 1 : 0;
    }
    mask[0] = 1;

    auto rep = metrics::regression_metrics(pred, gt, mask);

    double sa = 0, sq = 0, se = 0, sl = 0;
    std::int64_t n = 0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
      if (!mask[i]) continue;
      double d = pred[i] - gt[i];
      sa += std::fabs(d) / gt[i];
      sq += (d / gt[i]) * (d / gt[i]);
      se += d * d;
      double dl = std::log10(pred[i]) - std::log10(gt[i]);
      sl += dl * dl;
      ++n;
    }
    double want[4] = {sa / n, sq / n, std::sqrt(se / n), std::sqrt(sl / n)};
    double got[4] = {rep.abs_rel, rep.sq_rel, rep.rmse, rep.rmse_log};
    for (int k = 0; k < 4; ++k)
      max_diff = std::max(max_diff, std::fabs(got[k] - want[k]) / std::max(1.0, std::fabs(want[k])));
    if (rep.valid_count != n) max_diff = 1.0;
  }

  double p = 110.0, g = 100.0;
  auto rep = metrics::evaluate_pairs({&p, 1}, {&g, 1});
  bool worked = std::fabs(rep.abs_rel - 0.1) < 1e-12 && std::fabs(rep.sq_rel - 0.01) < 1e-12 &&
                std::fabs(rep.rmse - 10.0) < 1e-12 &&
                std::fabs(rep.rmse_log - 0.0413927) < 5e-8 &&
                std::fabs(rep.rmse_log - std::log10(1.1)) < 1e-12;
  report(5, max_diff <= 1e-12 && worked,
         "1000 random fields vs brute force: max rel diff %.3g (need <= 1e-12); "
         "110-vs-100 example -> (%.3g, %.3g, %.3g, %.7f)",
         max_diff, rep.abs_rel, rep.sq_rel, rep.rmse, rep.rmse_log);
}

// --- 6: visibility class boundaries ----------------------------------------

void criterion6() {
  const struct {
    double v;
    int want;
  } table[] = {{0.0, 0},   {199.999, 0}, {200.0, 1}, {399.999, 1},
               {400.0, 2}, {600.0, 3},   {800.0, 4}, {1e6, 4}};
  bool ok = true;
  char detail[160] = "";
  for (const auto& row : table) {
    int got = vis::classify(row.v);
    if (got != row.want) {
      ok = false;
      std::snprintf(detail, sizeof detail, "classify(%g) = %d, want %d; ", row.v, got, row.want);
      break;
    }
  }
  report(6, ok, "%sclass boundaries at {200,400,600,800} m%s", detail,
         ok ? " all exact" : "");
}

// --- 7: analytic gradients, SSIM identities, total loss --------------------

struct GradCheck {
  double max_rel = 0.0;
  void add(double analytic, double numeric) {
    max_rel = std::max(max_rel,
                       std::fabs(analytic - numeric) / std::max(1e-6, std::fabs(numeric)));
  }
};

void criterion7() {
  rng::Stream s(17);
  GradCheck gc;

  for (int trial = 0; trial < 20; ++trial) {
    // airlight loss: perturb one channel at a time
    {
      double e[3], g[3];
      for (int c = 0; c < 3; ++c) {
        e[c] = s.uniform(0.1, 0.9);
        g[c] = s.uniform(0.1, 0.9);
      }
      Airlight est(e[0], e[1], e[2]), gt(g[0], g[1], g[2]);
      auto grad = losses::loss_airlight_grad(est, gt);
      const double h = 1e-6;
      for (int c = 0; c < 3; ++c) {
        double hi[3] = {e[0], e[1], e[2]}, lo[3] = {e[0], e[1], e[2]};
        hi[c] += h;
        lo[c] -= h;
        double num = (losses::loss_airlight(Airlight(hi[0], hi[1], hi[2]), gt) -
                      losses::loss_airlight(Airlight(lo[0], lo[1], lo[2]), gt)) /
                     (2 * h);
        gc.add(grad[c], num);
      }
    }
    // transmission loss
    {
      ScalarField est(6, 7), gt(6, 7);
      for (std::size_t i = 0; i < est.size(); ++i) {
        est[i] = s.uniform(0.05, 0.95);
        gt[i] = s.uniform(0.05, 0.95);
      }
      auto grad = losses::loss_transmission_grad(est, gt);
      auto num = losses::numeric_gradient(
          [&](const ScalarField& f) { return losses::loss_transmission(f, gt); }, est);
      for (std::size_t i = 0; i < est.size(); ++i) gc.add(grad[i], num[i]);
    }
    // defog loss: manual central differences per channel
    {
      RgbImage est(5, 6), gt(5, 6);
      for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < est.pixels(); ++i) {
          est.plane(c)[i] = s.unit();
          gt.plane(c)[i] = s.unit();
        }
      auto grad = losses::loss_defog_grad(est, gt);
      const double h = 1e-6;
      RgbImage probe = est;
      for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < est.pixels(); ++i) {
          double keep = probe.plane(c)[i];
          probe.plane(c)[i] = keep + h;
          double up = losses::loss_defog(probe, gt);
          probe.plane(c)[i] = keep - h;
          double dn = losses::loss_defog(probe, gt);
          probe.plane(c)[i] = keep;
          gc.add(grad.plane(c)[i], (up - dn) / (2 * h));
        }
    }
    // visibility-consistency loss; keep every pixel away from the |.| kink
    {
      ScalarField de(6, 7), te(6, 7), dg(6, 7), tg(6, 7);
      for (std::size_t i = 0; i < de.size(); ++i) {
        de[i] = s.uniform(1.0, 60.0);
        dg[i] = s.uniform(1.0, 60.0);
        te[i] = s.uniform(0.02, 0.9);
        tg[i] = s.uniform(0.02, 0.9);
        while (std::fabs(de[i] * std::log(te[i]) - dg[i] * std::log(tg[i])) < 0.05) de[i] += 0.5;
      }
      auto grad = losses::loss_visibility_grad(de, te, dg, tg);
      auto num = losses::numeric_gradient(
          [&](const ScalarField& f) { return losses::loss_visibility(f, te, dg, tg); }, de);
      for (std::size_t i = 0; i < de.size(); ++i) gc.add(grad[i], num[i]);
    }
    // L1 component of the disparity loss; same kink guard
    {
      ScalarField est(6, 7), gt(6, 7);
      for (std::size_t i = 0; i < est.size(); ++i) {
        est[i] = s.uniform(0.35, 0.65);
        double off = s.uniform(0.05, 0.3);
        gt[i] = est[i] + (s.below(2) ? off : -off);
      }
      auto grad = losses::l1_mean_grad(est, gt);
      auto num = losses::numeric_gradient(
          [&](const ScalarField& f) { return losses::l1_mean(f, gt); }, est);
      for (std::size_t i = 0; i < est.size(); ++i) gc.add(grad[i], num[i]);
    }
  }

  ScalarField x(16, 16), y(16, 16);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = s.unit();
    y[i] = s.unit();
  }
  double self = losses::ssim(x, x);
  double xy = losses::ssim(x, y);
  double yx = losses::ssim(y, x);
  bool ssim_ok = std::fabs(self - 1.0) <= 1e-9 && std::memcmp(&xy, &yx, sizeof xy) == 0;

  double total = losses::total_loss({1.0, 1.0, 1.0, 1.0, 1.0});
  bool total_ok = std::fabs(total - 3.800001) < 1e-12;

  report(7, gc.max_rel < 1e-4 && ssim_ok && total_ok,
         "gradients vs central differences: max rel err %.3g (need < 1e-4); ssim(x,x)-1 = %.3g, "
         "symmetric %s; unit-term total %.9f (need 3.800001)",
         gc.max_rel, self - 1.0, ssim_ok ? "yes" : "NO", total);
}

// --- 8: split layout, scene-disjointness, regeneration ---------------------

void criterion8() {
  std::vector<std::string> ids(100);
  for (int i = 0; i < 100; ++i) {
    char b[16];
    std::snprintf(b, sizeof b, "scene%04d", i);
    ids[i] = b;
  }

  bool sizes_ok = true, disjoint_ok = true;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto sp = synth::make_split(ids, 30, seed);
    if (sp.train.size() != 2100 || sp.val.size() != 600 || sp.test.size() != 300)
      sizes_ok = false;
    std::map<std::string, int> part;
    auto scan = [&](const std::vector<std::pair<std::string, int>>& v, int tag) {
      for (const auto& [id, var] : v) {
        auto [it, fresh] = part.emplace(id, tag);
        if (!fresh && it->second != tag) disjoint_ok = false;
        (void)var;
      }
    };
    scan(sp.train, 0);
    scan(sp.val, 1);
    scan(sp.test, 2);
    if (part.size() != 100) disjoint_ok = false;
  }

  auto sp1 = synth::make_split(ids, 30, 424242);
  auto sp2 = synth::make_split(ids, 30, 424242);
  bool split_regen = sp1.train == sp2.train && sp1.val == sp2.val && sp1.test == sp2.test;

  auto scene_list = scenes::make_scenes(12, 24, 24);
  auto d1 = synth::build_dataset(scene_list, 2, 77);
  auto d2 = synth::build_dataset(scene_list, 2, 77);
  bool data_regen = d1.samples.size() == d2.samples.size() &&
                    d1.split.train == d2.split.train && d1.split.val == d2.split.val &&
                    d1.split.test == d2.split.test;
  for (std::size_t i = 0; data_regen && i < d1.samples.size(); ++i) {
    const auto& a = d1.samples[i];
    const auto& b = d2.samples[i];
    data_regen = a.scene_id == b.scene_id && a.variant_id == b.variant_id &&
                 std::memcmp(&a.visibility, &b.visibility, sizeof(double)) == 0 &&
                 std::memcmp(&a.beta, &b.beta, sizeof(double)) == 0 &&
                 std::memcmp(a.transmission.data(), b.transmission.data(),
                             a.transmission.size() * sizeof(double)) == 0;
    for (int c = 0; data_regen && c < 3; ++c)
      data_regen = std::memcmp(a.foggy.plane(c), b.foggy.plane(c),
                               a.foggy.pixels() * sizeof(double)) == 0;
  }

  report(8, sizes_ok && disjoint_ok && split_regen && data_regen,
         "100x30 split -> 2100/600/300 %s, scene-disjoint over 1000 seeds %s, regeneration "
         "byte-identical %s",
         sizes_ok ? "yes" : "NO", disjoint_ok ? "yes" : "NO",
         (split_regen && data_regen) ? "yes" : "NO");
}

// --- 9: airlight sampling statistics ---------------------------------------

void criterion9() {
  rng::Stream s(0x4149);
  const int n = 10000;
  bool bounds_ok = true;
  double sum_gb = 0.0, sum_r = 0.0;
  for (int i = 0; i < n; ++i) {
    Airlight a = synth::sample_airlight(s);
    double B = a.b * 255.0, G = a.g * 255.0, R = a.r * 255.0;
    if (!(B >= 180.0 - 1e-9 && B <= 255.0 + 1e-9)) bounds_ok = false;
    sum_gb += G - B;
    sum_r += R - (B + G) / 2.0;
  }
  double mean_gb = sum_gb / n, mean_r = sum_r / n;
  double band = 3.0 * (7.0 / std::sqrt(12.0)) / std::sqrt(static_cast<double>(n));
  bool ok = bounds_ok && std::fabs(mean_gb + 1.5) <= band && std::fabs(mean_r + 1.5) <= band;
  report(9, ok,
         "10^4 airlight draws: blue in [180,255] %s; mean(G-B) %.4f, mean(R-(B+G)/2) %.4f "
         "(need within %.4f of -1.5)",
         bounds_ok ? "always" : "VIOLATED", mean_gb, mean_r, band);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  if (g_failures == 0)
    std::printf("acceptance: all 9 criteria passed\n");
  else
    std::printf("acceptance: %d of 9 criteria FAILED\n", g_failures);
  return g_failures;
}
