#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fogbench/field.h"
#include "fogbench/synth.h"

namespace fogbench::dataset {

/// Parsed meta.json.
struct SampleMeta {
  std::string scene_id;
  int variant_id = 0;
  double visibility_m = 0.0;
  Airlight airlight;
  double epsilon = 0.05;
  std::uint64_t seed = 0;
};

/// "<scene_id>_v<NNN>"
std::string sample_dir_name(const std::string& scene_id, int variant_id);

/// Every value pushed through float32 (the PFM storage width).
ScalarField round_to_float(const ScalarField& f);

/// Writes one sample directory:
///   fogless.png       8-bit RGB
///   depth.pfm         float32 grayscale, +inf = sky
///   transmission.pfm  float32 grayscale
///   foggy.pfm         float32 RGB
///   foggy.png         8-bit RGB
///   meta.json
/// The transmission is rounded to float32 before the foggy image is formed,
/// so foggy.pfm is re-derivable bit-exactly from fogless.png + depth.pfm +
/// meta.json (plus the noise stream when noise_sigma > 0). `seed` is the
/// dataset seed recorded in meta.json and used to derive the noise stream.
void write_sample_dir(const std::filesystem::path& dir, const synth::FogSample& s,
                      std::uint64_t seed, double noise_sigma = 0.0);

struct LoadedSample {
  RgbImage fogless;
  ScalarField depth;
  ScalarField transmission;
  RgbImage foggy;
  bool foggy_from_pfm = false;  // foggy.pfm preferred; foggy.png is the fallback
  SampleMeta meta;
};

SampleMeta read_meta(const std::filesystem::path& dir);
LoadedSample read_sample_dir(const std::filesystem::path& dir);

/// split.json: {"train"|"val"|"test": [[scene_id, variant_id], ...]}.
void write_split(const std::filesystem::path& path, const synth::SplitManifest& split);
synth::SplitManifest read_split(const std::filesystem::path& path);

/// Immediate subdirectories of root containing a meta.json, sorted by name.
std::vector<std::filesystem::path> list_sample_dirs(const std::filesystem::path& root);

}  // namespace fogbench::dataset
