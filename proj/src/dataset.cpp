#include "fogbench/dataset.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "fogbench/image_io.h"
#include "fogbench/physics.h"

namespace fogbench::dataset {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json load_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error(p.string() + ": cannot open");
  return ordered_json::parse(in);
}

void store_json(const fs::path& p, const ordered_json& j) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error(p.string() + ": cannot open for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error(p.string() + ": write failed");
}

}  // namespace

std::string sample_dir_name(const std::string& scene_id, int variant_id) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "_v%03d", variant_id);
  return scene_id + buf;
}

ScalarField round_to_float(const ScalarField& f) {
  ScalarField out(f.height(), f.width());
  for (std::size_t i = 0; i < f.size(); ++i)
    out[i] = static_cast<double>(static_cast<float>(f[i]));
  return out;
}

void write_sample_dir(const fs::path& dir, const synth::FogSample& s, std::uint64_t seed,
                      double noise_sigma) {
  fs::create_directories(dir);
  ScalarField t32 = round_to_float(s.transmission);
  RgbImage foggy = physics::synthesize(s.fogless, t32, s.airlight);
  if (noise_sigma > 0.0) {
    auto rng = synth::noise_stream(seed, s.scene_id, s.variant_id);
    foggy = synth::add_noise(foggy, noise_sigma, rng);
  }
  io::write_png(dir / "fogless.png", s.fogless);
  io::write_pfm(dir / "depth.pfm", s.depth);
  io::write_pfm(dir / "transmission.pfm", t32);
  io::write_pfm_rgb(dir / "foggy.pfm", foggy);
  io::write_png(dir / "foggy.png", foggy);

  ordered_json meta;
  meta["scene_id"] = s.scene_id;
  meta["variant_id"] = s.variant_id;
  meta["visibility_m"] = s.visibility;
  meta["airlight_rgb"] = {s.airlight.r, s.airlight.g, s.airlight.b};
  meta["epsilon"] = s.epsilon;
  meta["seed"] = seed;
  store_json(dir / "meta.json", meta);
}

SampleMeta read_meta(const fs::path& dir) {
  ordered_json j = load_json(dir / "meta.json");
  SampleMeta m;
  m.scene_id = j.at("scene_id").get<std::string>();
  m.variant_id = j.at("variant_id").get<int>();
  m.visibility_m = j.at("visibility_m").get<double>();
  auto a = j.at("airlight_rgb");
  if (!a.is_array() || a.size() != 3)
    throw std::runtime_error((dir / "meta.json").string() + ": airlight_rgb must have 3 entries");
  m.airlight = Airlight(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
  m.epsilon = j.at("epsilon").get<double>();
  m.seed = j.at("seed").get<std::uint64_t>();
  return m;
}

LoadedSample read_sample_dir(const fs::path& dir) {
  LoadedSample s;
  s.meta = read_meta(dir);
  s.fogless = io::read_png(dir / "fogless.png");
  s.depth = io::read_pfm(dir / "depth.pfm");
  s.transmission = io::read_pfm(dir / "transmission.pfm");
  if (fs::exists(dir / "foggy.pfm")) {
    s.foggy = io::read_pfm_rgb(dir / "foggy.pfm");
    s.foggy_from_pfm = true;
  } else {
    s.foggy = io::read_png(dir / "foggy.png");
  }
  return s;
}

void write_split(const fs::path& path, const synth::SplitManifest& split) {
  ordered_json j;
  for (auto [name, part] : {std::pair{"train", &split.train}, {"val", &split.val},
                            {"test", &split.test}}) {
    ordered_json arr = ordered_json::array();
    for (const auto& [id, v] : *part) arr.push_back({id, v});
    j[name] = std::move(arr);
  }
  store_json(path, j);
}

synth::SplitManifest read_split(const fs::path& path) {
  ordered_json j = load_json(path);
  synth::SplitManifest m;
  for (auto [name, part] :
       {std::pair{"train", &m.train}, {"val", &m.val}, {"test", &m.test}}) {
    for (const auto& e : j.at(name))
      part->emplace_back(e.at(0).get<std::string>(), e.at(1).get<int>());
  }
  return m;
}

std::vector<fs::path> list_sample_dirs(const fs::path& root) {
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory() && fs::exists(e.path() / "meta.json")) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

}  // namespace fogbench::dataset
