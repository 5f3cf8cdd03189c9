#pragma once

#include <string>
#include <vector>

#include "fogbench/field.h"

namespace fogbench::scenes {

struct Scene {
  std::string id;
  RgbImage fogless;
  ScalarField depth;  // meters; +inf in the sky region
};

/// Deterministic procedural scene: sky band (+inf depth), textured ground
/// plane with perspective depth falloff, and a handful of boxes. Image
/// channels are exact multiples of 1/255 and depth values are float32-exact,
/// so PNG/PFM round trips are lossless.
Scene make_scene(int index, int height, int width);

std::vector<Scene> make_scenes(int count, int height, int width);

}  // namespace fogbench::scenes
