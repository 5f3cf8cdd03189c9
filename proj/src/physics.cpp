#include "fogbench/physics.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fogbench/kernels.h"

namespace fogbench::physics {
namespace {

void require_depth(const ScalarField& d, const char* who) {
  for (std::size_t i = 0; i < d.size(); ++i)
    if (!(d[i] >= 0.0))  // catches negatives and NaN
      throw std::domain_error(std::string(who) + ": depth must be >= 0");
}

void require_transmission_range(const ScalarField& t, const char* who) {
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!(t[i] >= 0.0 && t[i] <= 1.0))
      throw std::domain_error(std::string(who) + ": transmission must be in [0,1]");
}

}  // namespace

ScalarField transmission_from_depth(const ScalarField& depth, double beta) {
  if (!(beta >= 0.0)) throw std::domain_error("transmission_from_depth: beta must be >= 0");
  require_depth(depth, "transmission_from_depth");
  ScalarField t(depth.height(), depth.width());
  kernels::active_kernels().exp_neg_scaled(depth.data(), beta, t.data(), depth.size());
  return t;
}

RgbImage synthesize(const RgbImage& fogless, const ScalarField& transmission, const Airlight& a) {
  if (!fogless.same_shape(transmission))
    throw std::invalid_argument("synthesize: image and transmission shapes differ");
  require_transmission_range(transmission, "synthesize");
  RgbImage out(fogless.height(), fogless.width());
  const auto& k = kernels::active_kernels();
  for (int c = 0; c < 3; ++c)
    k.compose(fogless.plane(c), transmission.data(), a.channel(c), out.plane(c),
              transmission.size());
  return out;
}

MaskedImage defog(const RgbImage& foggy, const Airlight& a, const ScalarField& transmission,
                  double t_floor) {
  if (!foggy.same_shape(transmission))
    throw std::invalid_argument("defog: image and transmission shapes differ");
  if (!(t_floor > 0.0)) throw std::invalid_argument("defog: t_floor must be > 0");
  MaskedImage out{RgbImage(foggy.height(), foggy.width()),
                  Mask(foggy.height(), foggy.width())};
  const auto& k = kernels::active_kernels();
  for (int c = 0; c < 3; ++c)
    k.defog(foggy.plane(c), transmission.data(), a.channel(c), out.image.plane(c),
            transmission.size());
  k.mask_ge(transmission.data(), t_floor, out.valid.data(), transmission.size());
  return out;
}

double contrast(double object_luminance, double background_luminance) {
  if (background_luminance == 0.0)
    throw std::domain_error("contrast: background luminance must be nonzero");
  return (object_luminance - background_luminance) / background_luminance;
}

MaskedField visibility_map(const ScalarField& depth, const ScalarField& transmission,
                           Epsilon eps) {
  if (!depth.same_shape(transmission))
    throw std::invalid_argument("visibility_map: depth and transmission shapes differ");
  require_depth(depth, "visibility_map");
  MaskedField out{ScalarField(depth.height(), depth.width()),
                  Mask(depth.height(), depth.width())};
  kernels::active_kernels().visibility(depth.data(), transmission.data(), std::log(eps.value),
                                       out.values.data(), out.valid.data(), depth.size());
  return out;
}

double visibility_from_beta(double beta, Epsilon eps) {
  if (!(beta > 0.0)) throw std::domain_error("visibility_from_beta: beta must be > 0");
  return -std::log(eps.value) / beta;
}

double beta_from_visibility(double visibility, Epsilon eps) {
  if (!(visibility > 0.0)) throw std::domain_error("beta_from_visibility: visibility must be > 0");
  return -std::log(eps.value) / visibility;
}

}  // namespace fogbench::physics
