#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fogbench/field.h"

namespace fogbench::invert {

/// Raised when the residual is flat in beta (e.g. the fog-free image equals
/// the airlight everywhere) and no unique fit exists.
class IdentifiabilityError : public std::runtime_error {
 public:
  explicit IdentifiabilityError(const std::string& what) : std::runtime_error(what) {}
};

struct FitOptions {
  Epsilon eps{};
  double visibility_lo = 10.0;    // sampling range of the generator; the beta
  double visibility_hi = 1000.0;  // bracket covers [lo/widen, hi*widen]
  double widen = 2.0;
  double golden_tol = 1e-8;       // bracket width termination on beta
  int max_golden_iters = 200;
  int max_newton_steps = 5;
  std::vector<double>* objective_trace = nullptr;  // best objective per shrink
};

struct FitResult {
  Airlight airlight;
  double beta = 0.0;
  double visibility = 0.0;  // visibility_from_beta(beta, eps)
  double residual_rms = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Joint recovery of (airlight, extinction) for uniform fog by variable
/// projection: for fixed beta the best airlight has a channel-wise closed
/// form, leaving a 1-D golden-section search over beta with a Newton polish.
FitResult fit_uniform_fog(const RgbImage& foggy, const RgbImage& fogless, const ScalarField& depth,
                          const FitOptions& opt = {});

/// Per-pixel transmission from a foggy/fog-free pair with known airlight:
/// channel-wise least squares over channels with |J - A| > contrast_floor,
/// clamped to [0,1]. Pixels with no usable channel are invalid.
MaskedField transmission_from_images(const RgbImage& foggy, const RgbImage& fogless,
                                     const Airlight& a, double contrast_floor = 0.05);

/// Airlight proposal: mean color of the brightest `percentile` percent of
/// pixels by luminance (at least one pixel).
Airlight estimate_airlight_bright(const RgbImage& foggy, double percentile = 0.1);

}  // namespace fogbench::invert
