#pragma once

#include "fogbench/field.h"

namespace fogbench::physics {

/// T = exp(-beta * D). T = 0 exactly where D = +inf, regardless of beta.
ScalarField transmission_from_depth(const ScalarField& depth, double beta);

/// Scattering composition I = J*T + A*(1-T), per channel.
RgbImage synthesize(const RgbImage& fogless, const ScalarField& transmission, const Airlight& a);

/// Analytic inversion J = (I - A)/T + A, clamped to [0,1]. Pixels with
/// T < t_floor are marked invalid (their values are still the clamped
/// arithmetic result).
MaskedImage defog(const RgbImage& foggy, const Airlight& a, const ScalarField& transmission,
                  double t_floor = 0.01);

/// Weber contrast (object - background) / background.
double contrast(double object_luminance, double background_luminance);

/// Per-pixel visibility V = ln(eps) * D / ln(T). Pixels whose transmission
/// lies outside (0,1) are invalid.
MaskedField visibility_map(const ScalarField& depth, const ScalarField& transmission, Epsilon eps);

/// Uniform-fog visibility V = -ln(eps)/beta.
double visibility_from_beta(double beta, Epsilon eps);

/// Inverse of the above: beta = -ln(eps)/V.
double beta_from_visibility(double visibility, Epsilon eps);

}  // namespace fogbench::physics
