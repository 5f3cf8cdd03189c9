#pragma once

#include <cstdint>
#include <vector>

#include "fogbench/field.h"

namespace fogbench::colormap {

// Piecewise-linear blue->cyan->yellow->red ramp over u in [0,1].
// Values land in [0,1] per channel.
void ramp(double u, double& r, double& g, double& b);

// Renders `field` to interleaved 8-bit RGB. Values are mapped linearly from
// [lo, hi] onto the ramp (clamped outside); pixels where `valid` is zero come
// out black. `valid` may be null to mean all-valid. Requires hi > lo.
std::vector<std::uint8_t> render(const ScalarField& field, const Mask* valid,
                                 double lo, double hi);

}  // namespace fogbench::colormap
