#include "fogbench/colormap.h"

#include <cmath>
#include <stdexcept>

namespace fogbench::colormap {

namespace {

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace

void ramp(double u, double& r, double& g, double& b) {
  u = clamp01(u);
  r = clamp01(1.5 - std::fabs(4.0 * u - 3.0));
  g = clamp01(1.5 - std::fabs(4.0 * u - 2.0));
  b = clamp01(1.5 - std::fabs(4.0 * u - 1.0));
}

std::vector<std::uint8_t> render(const ScalarField& field, const Mask* valid,
                                 double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("colormap::render: need hi > lo");
  if (valid && (valid->height() != field.height() || valid->width() != field.width()))
    throw std::invalid_argument("colormap::render: mask shape mismatch");
  const std::size_t n = field.size();
  std::vector<std::uint8_t> out(n * 3, 0);
  const double inv = 1.0 / (hi - lo);
  for (std::size_t i = 0; i < n; ++i) {
    if (valid && !(*valid)[i]) continue;  // invalid stays black
    double r, g, b;
    ramp((field[i] - lo) * inv, r, g, b);
    out[3 * i + 0] = static_cast<std::uint8_t>(std::lround(r * 255.0));
    out[3 * i + 1] = static_cast<std::uint8_t>(std::lround(g * 255.0));
    out[3 * i + 2] = static_cast<std::uint8_t>(std::lround(b * 255.0));
  }
  return out;
}

}  // namespace fogbench::colormap
