#pragma once

#include <array>
#include <functional>

#include "fogbench/field.h"

namespace fogbench::losses {

struct LossWeights {
  double airlight = 1.0;
  double transmission = 1.0;
  double disparity = 0.8;
  double defog = 1e-6;
  double visibility = 1.0;
  // mixture inside the disparity term
  double l1 = 0.15;
  double ssim = 0.85;
  double smooth = 1e-3;

  void validate() const;
};

/// RMSE over the three channels.
double loss_airlight(const Airlight& est, const Airlight& gt);
std::array<double, 3> loss_airlight_grad(const Airlight& est, const Airlight& gt);

/// RMSE over pixels.
double loss_transmission(const ScalarField& est, const ScalarField& gt);
ScalarField loss_transmission_grad(const ScalarField& est, const ScalarField& gt);

/// RMSE over pixels and channels.
double loss_defog(const RgbImage& est, const RgbImage& gt);
RgbImage loss_defog_grad(const RgbImage& est, const RgbImage& gt);

/// Mean SSIM, 11x11 Gaussian window (sigma 1.5), C1 = 1e-4, C2 = 9e-4,
/// dynamic range 1, evaluated at fully-covered window positions only.
/// Fields smaller than the window are an error.
double ssim(const ScalarField& x, const ScalarField& y);

double l1_mean(const ScalarField& est, const ScalarField& gt);
ScalarField l1_mean_grad(const ScalarField& est, const ScalarField& gt);

/// Edge-aware smoothness of a disparity field against its fog-free image:
/// forward differences, zero gradient at the last row/column, image weight
/// exp(-mean_c |dJ_c|), normalized by pixel count.
double smoothness(const ScalarField& disparity, const RgbImage& guide);

/// l1 * L1 + ssim * (1 - SSIM)/2 + smooth * smoothness(est, guide).
double loss_disparity(const ScalarField& est, const ScalarField& gt, const RgbImage& guide,
                      const LossWeights& w = {});

/// Mean |dbar_est * ln t_est - dbar_gt * ln t_gt| over pixels where both
/// transmissions are positive; t = 1 contributes ln 1 = 0.
double loss_visibility(const ScalarField& dbar_est, const ScalarField& t_est,
                       const ScalarField& dbar_gt, const ScalarField& t_gt);
/// Gradient with respect to dbar_est.
ScalarField loss_visibility_grad(const ScalarField& dbar_est, const ScalarField& t_est,
                                 const ScalarField& dbar_gt, const ScalarField& t_gt);

struct LossTerms {
  double airlight = 0.0;
  double transmission = 0.0;
  double disparity = 0.0;
  double defog = 0.0;
  double visibility = 0.0;
};

double total_loss(const LossTerms& t, const LossWeights& w = {});

/// Central-difference gradient of a scalar functional of a field; the
/// verification oracle for the analytic gradients above.
ScalarField numeric_gradient(const std::function<double(const ScalarField&)>& f,
                             const ScalarField& at, double h = 1e-5);

}  // namespace fogbench::losses
