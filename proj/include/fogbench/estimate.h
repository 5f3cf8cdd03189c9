#pragma once

#include <cstdint>
#include <vector>

#include "fogbench/field.h"

namespace fogbench::vis {

struct EstimationConfig {
  Epsilon eps{};
  double t_min = 1e-2;  // transmission floor for the image-wise mask
  double v_max = 1e5;   // visibility ceiling for the image-wise mask
  double v_min = 10.0;  // fallback when no pixel passes the mask

  void validate() const;
};

/// V = ln(eps) * D_est / ln(T_est) on estimated fields. Same contract as
/// physics::visibility_map.
MaskedField pixel_visibility(const ScalarField& t_est, const ScalarField& d_est, Epsilon eps);

/// Pixels that enter the image-wise mean: valid in v_est, T strictly above
/// t_min and V strictly below v_max.
Mask visibility_mask(const MaskedField& v_est, const ScalarField& t_est,
                     const EstimationConfig& cfg = {});

/// Mean visibility over the mask above; v_min when the mask is empty.
double image_visibility(const MaskedField& v_est, const ScalarField& t_est,
                        const EstimationConfig& cfg = {});

/// 200 m bins: [0,200) -> 0, [200,400) -> 1, [400,600) -> 2, [600,800) -> 3,
/// [800,inf) -> 4.
int classify(double visibility_m);

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edge values
  std::vector<std::int64_t> counts;
};

/// Uniform-bin histogram of masked values over [lo, hi]; every bin is
/// half-open except the last, which includes hi. Out-of-range values are not
/// counted.
Histogram masked_histogram(const ScalarField& values, const Mask& mask, int bins, double lo,
                           double hi);

}  // namespace fogbench::vis
