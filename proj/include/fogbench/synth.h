#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fogbench/field.h"
#include "fogbench/rng.h"
#include "fogbench/scenes.h"

namespace fogbench::synth {

struct FogSample {
  std::string scene_id;
  int variant_id = 0;
  RgbImage fogless;
  ScalarField depth;
  double visibility = 0.0;  // meters, drawn from U(10, 1000)
  double beta = 0.0;        // extinction implied by visibility and eps
  double epsilon = 0.05;    // contrast threshold the sample was built under
  Airlight airlight;
  ScalarField transmission;
  RgbImage foggy;
};

/// Sky-tinted airlight on the 0-255 scale: B ~ U(180,255),
/// G = min(U(B-5, B+2), 255), R = min(U((B+G)/2 - 5, (B+G)/2 + 2), 255),
/// normalized to [0,1]. Draw order: B, G, R.
Airlight sample_airlight(rng::Stream& rng);

/// One fog variant. Stream draw order: visibility, then the airlight draws.
FogSample make_sample(const RgbImage& fogless, const ScalarField& depth, rng::Stream& rng,
                      Epsilon eps = {});

struct SplitManifest {
  std::vector<std::pair<std::string, int>> train, val, test;  // (scene_id, variant_id)
};

/// Scene-disjoint 7:2:1 split; all variants of a scene travel together.
/// Scene order is shuffled by a substream of the seed. Fewer than 10 scenes
/// cannot realize the ratio and is an error.
SplitManifest make_split(const std::vector<std::string>& scene_ids, int variants_per_scene,
                         std::uint64_t seed);

/// Runs fn over every (scene, variant) pair. Each sample's RNG substream is
/// derived from (seed, scene id, variant), so outputs are independent of
/// traversal and thread scheduling; fn may be invoked concurrently.
void for_each_sample(const std::vector<scenes::Scene>& scene_list, int variants_per_scene,
                     std::uint64_t seed, Epsilon eps,
                     const std::function<void(int scene_idx, int variant, FogSample&&)>& fn,
                     int workers = 1);

struct Dataset {
  std::vector<FogSample> samples;  // scene-major, variant-minor order
  SplitManifest split;
};

Dataset build_dataset(const std::vector<scenes::Scene>& scene_list, int variants_per_scene,
                      std::uint64_t seed, Epsilon eps = {});

/// Additive Gaussian channel noise, clamped back to [0,1]. Draw order:
/// plane-major (all of R, then G, then B), row-major within a plane.
RgbImage add_noise(const RgbImage& img, double sigma, rng::Stream& rng);

/// Substream used for a sample; exposed so file-level consumers derive the
/// same streams as the library.
rng::Stream sample_stream(std::uint64_t seed, const std::string& scene_id, int variant_id);

/// Independent substream for per-sample noise injection.
rng::Stream noise_stream(std::uint64_t seed, const std::string& scene_id, int variant_id);

}  // namespace fogbench::synth
