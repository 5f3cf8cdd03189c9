#include "fogbench/estimate.h"

#include <cmath>
#include <stdexcept>

#include "fogbench/kernels.h"
#include "fogbench/physics.h"

namespace fogbench::vis {

void EstimationConfig::validate() const {
  if (!(t_min > 0.0 && t_min < 1.0))
    throw std::invalid_argument("EstimationConfig: t_min must be in (0,1)");
  if (!(v_min > 0.0) || !(v_max > v_min))
    throw std::invalid_argument("EstimationConfig: need v_max > v_min > 0");
}

MaskedField pixel_visibility(const ScalarField& t_est, const ScalarField& d_est, Epsilon eps) {
  return physics::visibility_map(d_est, t_est, eps);
}

Mask visibility_mask(const MaskedField& v_est, const ScalarField& t_est,
                     const EstimationConfig& cfg) {
  cfg.validate();
  if (!v_est.values.same_shape(t_est))
    throw std::invalid_argument("visibility_mask: field shapes differ");
  Mask m(t_est.height(), t_est.width());
  const auto& k = kernels::active_kernels();
  k.mask_gt(t_est.data(), cfg.t_min, m.data(), t_est.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    if (!v_est.valid[i]) m[i] = 0;
  k.mask_and_lt(v_est.values.data(), cfg.v_max, m.data(), m.size());
  return m;
}

double image_visibility(const MaskedField& v_est, const ScalarField& t_est,
                        const EstimationConfig& cfg) {
  Mask m = visibility_mask(v_est, t_est, cfg);
  auto sc = kernels::active_kernels().sum_count_masked(v_est.values.data(), m.data(), m.size());
  if (sc.count == 0) return cfg.v_min;
  return sc.sum / static_cast<double>(sc.count);
}

int classify(double visibility_m) {
  if (!(visibility_m >= 0.0)) throw std::domain_error("classify: visibility must be >= 0");
  if (visibility_m < 200.0) return 0;
  if (visibility_m < 400.0) return 1;
  if (visibility_m < 600.0) return 2;
  if (visibility_m < 800.0) return 3;
  return 4;
}

Histogram masked_histogram(const ScalarField& values, const Mask& mask, int bins, double lo,
                           double hi) {
  if (bins < 1) throw std::invalid_argument("masked_histogram: bins must be >= 1");
  if (!(hi > lo)) throw std::invalid_argument("masked_histogram: need hi > lo");
  if (values.height() != mask.height() || values.width() != mask.width())
    throw std::invalid_argument("masked_histogram: field and mask shapes differ");
  Histogram h;
  h.edges.resize(bins + 1);
  h.counts.assign(bins, 0);
  double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) h.edges[b] = lo + width * b;
  h.edges[bins] = hi;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!mask[i]) continue;
    double v = values[i];
    if (!(v >= lo && v <= hi)) continue;  // all bins half-open, last bin closed
    auto b = static_cast<int>((v - lo) / width);
    if (b >= bins) b = bins - 1;  // top edge and roundoff just below it
    h.counts[b] += 1;
  }
  return h;
}

}  // namespace fogbench::vis
