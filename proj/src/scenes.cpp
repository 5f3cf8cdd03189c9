#include "fogbench/scenes.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "fogbench/rng.h"

namespace fogbench::scenes {
namespace {

constexpr std::uint64_t kSceneSeed = 0x666f67626e636800ULL;

double q8(double v) {
  long k = std::lround(std::clamp(v, 0.0, 1.0) * 255.0);
  return static_cast<double>(k) / 255.0;
}

double f32(double v) { return static_cast<double>(static_cast<float>(v)); }

/// Stateless per-pixel noise in [0,1); keeps the scene rng draw order
/// independent of image size.
double hash01(std::uint64_t key) {
  std::uint64_t s = key;
  return static_cast<double>(rng::splitmix64_next(s) >> 11) * 0x1.0p-53;
}

}  // namespace

Scene make_scene(int index, int height, int width) {
  if (index < 0) throw std::invalid_argument("make_scene: index must be >= 0");
  Scene sc;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "scene%04d", index);
  sc.id = buf;
  sc.fogless = RgbImage(height, width);
  sc.depth = ScalarField(height, width);

  rng::Stream rs = rng::Stream(kSceneSeed).substream(0x7363656eULL, static_cast<std::uint64_t>(index));
  std::uint64_t pixkey = rs.next_u64();

  int horizon = std::clamp(static_cast<int>(height * rs.uniform(0.28, 0.45)), 1, height - 2);
  double d_near = rs.uniform(2.0, 6.0);
  double d_far = rs.uniform(200.0, 800.0);
  double sky_top[3] = {rs.uniform(0.45, 0.6), rs.uniform(0.55, 0.7), rs.uniform(0.65, 0.8)};
  double sky_bot[3] = {rs.uniform(0.6, 0.75), rs.uniform(0.65, 0.8), rs.uniform(0.7, 0.85)};
  double g_a[3] = {rs.uniform(0.15, 0.5), rs.uniform(0.2, 0.55), rs.uniform(0.1, 0.4)};
  double g_b[3] = {rs.uniform(0.3, 0.7), rs.uniform(0.25, 0.65), rs.uniform(0.2, 0.6)};
  int stripe = 5 + static_cast<int>(rs.below(9));

  for (int r = 0; r < height; ++r) {
    bool sky = r < horizon;
    double frac = sky ? static_cast<double>(r) / horizon
                      : static_cast<double>(r - horizon + 1) / (height - horizon);
    double row_depth = d_near + (d_far - d_near) * std::pow(1.0 - frac, 2.0);
    for (int c = 0; c < width; ++c) {
      std::uint64_t key = pixkey ^ (static_cast<std::uint64_t>(r) << 24) ^
                          static_cast<std::uint64_t>(c);
      double n = (hash01(key) - 0.5) * 0.12;
      if (sky) {
        sc.depth.at(r, c) = std::numeric_limits<double>::infinity();
        for (int ch = 0; ch < 3; ++ch)
          sc.fogless.at(r, c, ch) = q8(sky_top[ch] + (sky_bot[ch] - sky_top[ch]) * frac + 0.3 * n);
      } else {
        sc.depth.at(r, c) = f32(row_depth);
        bool even = ((r / stripe) + (c / stripe)) % 2 == 0;
        for (int ch = 0; ch < 3; ++ch)
          sc.fogless.at(r, c, ch) = q8((even ? g_a[ch] : g_b[ch]) + n);
      }
    }
  }

  int boxes = 4 + static_cast<int>(rs.below(4));
  for (int b = 0; b < boxes; ++b) {
    int bw = 2 + static_cast<int>(rs.below(std::max(1, width / 4)));
    int bh = 2 + static_cast<int>(rs.below(std::max(1, height / 4)));
    int c0 = static_cast<int>(rs.below(std::max(1, width - bw)));
    int r0 = static_cast<int>(rs.below(std::max(1, height - bh)));
    double bd = f32(rs.uniform(8.0, 150.0));
    double col[3] = {rs.uniform(0.05, 0.9), rs.uniform(0.05, 0.9), rs.uniform(0.05, 0.9)};
    for (int r = r0; r < std::min(height, r0 + bh); ++r)
      for (int c = c0; c < std::min(width, c0 + bw); ++c) {
        std::uint64_t key = pixkey ^ (static_cast<std::uint64_t>(r) << 24) ^
                            static_cast<std::uint64_t>(c) ^ 0x9e37ULL;
        double n = (hash01(key) - 0.5) * 0.08;
        sc.depth.at(r, c) = bd;
        for (int ch = 0; ch < 3; ++ch) sc.fogless.at(r, c, ch) = q8(col[ch] + n);
      }
  }
  return sc;
}

std::vector<Scene> make_scenes(int count, int height, int width) {
  if (count < 1) throw std::invalid_argument("make_scenes: count must be >= 1");
  std::vector<Scene> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(make_scene(i, height, width));
  return out;
}

}  // namespace fogbench::scenes
