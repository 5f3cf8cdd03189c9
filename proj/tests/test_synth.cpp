#include <doctest.h>

#include <cmath>
#include <cstring>
#include <set>
#include <string>
#include <vector>

#include "fogbench/physics.h"
#include "fogbench/scenes.h"
#include "fogbench/synth.h"

using namespace fogbench;

namespace {

bool images_equal(const RgbImage& a, const RgbImage& b) {
  if (!a.same_shape(b)) return false;
  for (int c = 0; c < 3; ++c)
    if (std::memcmp(a.plane(c), b.plane(c), a.pixels() * sizeof(double)) != 0) return false;
  return true;
}

bool fields_equal(const ScalarField& a, const ScalarField& b) {
  return a.same_shape(b) &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("procedural scenes are deterministic and storage-exact") {
  auto a = scenes::make_scene(3, 40, 56);
  auto b = scenes::make_scene(3, 40, 56);
  CHECK(a.id == b.id);
  CHECK(images_equal(a.fogless, b.fogless));
  CHECK(fields_equal(a.depth, b.depth));

  // channels quantized to the 8-bit grid: PNG storage loses nothing
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.fogless.pixels(); ++i) {
      double v = a.fogless.plane(c)[i];
      CHECK(v == std::lround(v * 255.0) / 255.0);
    }
  // depth exactly representable in float32: PFM storage loses nothing
  bool any_sky = false;
  for (std::size_t i = 0; i < a.depth.size(); ++i) {
    double d = a.depth[i];
    any_sky |= std::isinf(d);
    CHECK(static_cast<double>(static_cast<float>(d)) == d);
    CHECK((d > 0.0 || std::isinf(d)));
  }
  CHECK(any_sky);

  CHECK(scenes::make_scene(4, 40, 56).id != a.id);
}

TEST_CASE("airlight sampling stays inside its construction") {
  rng::Stream s(51);
  for (int i = 0; i < 2000; ++i) {
    Airlight a = synth::sample_airlight(s);
    double b = a.b * 255.0, g = a.g * 255.0, r = a.r * 255.0;
    CHECK(b >= 180.0);
    CHECK(b <= 255.0);
    CHECK(g >= b - 5.0);
    CHECK(g <= std::min(b + 2.0, 255.0));
    double mid = (b + g) / 2.0;
    CHECK(r >= mid - 5.0);
    CHECK(r <= std::min(mid + 2.0, 255.0));
  }
}

TEST_CASE("samples are internally consistent") {
  auto sc = scenes::make_scene(0, 24, 24);
  auto rng = synth::sample_stream(7, sc.id, 0);
  auto s = synth::make_sample(sc.fogless, sc.depth, rng, Epsilon(0.05));

  CHECK(s.visibility >= 10.0);
  CHECK(s.visibility < 1000.0);
  CHECK(s.beta == physics::beta_from_visibility(s.visibility, Epsilon(0.05)));
  CHECK(s.epsilon == 0.05);
  CHECK(fields_equal(s.transmission, physics::transmission_from_depth(sc.depth, s.beta)));
  CHECK(images_equal(s.foggy, physics::synthesize(sc.fogless, s.transmission, s.airlight)));
}

TEST_CASE("sample streams are keyed by seed, scene and variant") {
  auto a = synth::sample_stream(7, "scene0001", 2);
  auto b = synth::sample_stream(7, "scene0001", 2);
  CHECK(a.next_u64() == b.next_u64());

  std::set<std::uint64_t> firsts;
  firsts.insert(synth::sample_stream(7, "scene0001", 2).next_u64());
  firsts.insert(synth::sample_stream(7, "scene0001", 3).next_u64());
  firsts.insert(synth::sample_stream(7, "scene0002", 2).next_u64());
  firsts.insert(synth::sample_stream(8, "scene0001", 2).next_u64());
  firsts.insert(synth::noise_stream(7, "scene0001", 2).next_u64());
  CHECK(firsts.size() == 5);
}

TEST_CASE("dataset traversal is independent of worker count") {
  auto scene_list = scenes::make_scenes(3, 16, 16);
  const int variants = 2;

  auto collect = [&](int workers) {
    std::vector<synth::FogSample> out(scene_list.size() * variants);
    synth::for_each_sample(
        scene_list, variants, 99, Epsilon(0.05),
        [&](int si, int vi, synth::FogSample&& s) { out[si * variants + vi] = std::move(s); },
        workers);
    return out;
  };
  auto serial = collect(1);
  auto parallel = collect(4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].scene_id == parallel[i].scene_id);
    CHECK(serial[i].visibility == parallel[i].visibility);
    CHECK(images_equal(serial[i].foggy, parallel[i].foggy));
  }

  SUBCASE("build_dataset repeats bitwise under the same seed") {
    // build_dataset also makes a split, which needs at least ten scenes
    auto ten = scenes::make_scenes(10, 16, 16);
    auto d1 = synth::build_dataset(ten, variants, 99);
    auto d2 = synth::build_dataset(ten, variants, 99);
    REQUIRE(d1.samples.size() == d2.samples.size());
    for (std::size_t i = 0; i < d1.samples.size(); ++i)
      CHECK(images_equal(d1.samples[i].foggy, d2.samples[i].foggy));
    CHECK(d1.split.train == d2.split.train);
    CHECK(d1.split.test == d2.split.test);
  }
}

TEST_CASE("scene-disjoint split with the 7:2:1 ratio") {
  std::vector<std::string> ids;
  for (int i = 0; i < 100; ++i) ids.push_back("s" + std::to_string(i));

  auto split = synth::make_split(ids, 30, 7);
  CHECK(split.train.size() == 2100);
  CHECK(split.val.size() == 600);
  CHECK(split.test.size() == 300);

  std::set<std::string> train_scenes, val_scenes, test_scenes;
  for (auto& [id, v] : split.train) train_scenes.insert(id);
  for (auto& [id, v] : split.val) val_scenes.insert(id);
  for (auto& [id, v] : split.test) test_scenes.insert(id);
  CHECK(train_scenes.size() == 70);
  CHECK(val_scenes.size() == 20);
  CHECK(test_scenes.size() == 10);
  for (const auto& id : val_scenes) CHECK(train_scenes.count(id) == 0);
  for (const auto& id : test_scenes) {
    CHECK(train_scenes.count(id) == 0);
    CHECK(val_scenes.count(id) == 0);
  }

  // every (scene, variant) pair appears exactly once overall
  std::set<std::pair<std::string, int>> all;
  for (auto* part : {&split.train, &split.val, &split.test})
    for (auto& p : *part) all.insert(p);
  CHECK(all.size() == 3000);

  SUBCASE("non-divisible scene counts round the same way as integer math") {
    std::vector<std::string> eleven(ids.begin(), ids.begin() + 11);
    auto sp = synth::make_split(eleven, 1, 0);
    CHECK(sp.train.size() == 7);
    CHECK(sp.val.size() == 2);
    CHECK(sp.test.size() == 2);
  }
  SUBCASE("too few scenes cannot realize the ratio") {
    std::vector<std::string> nine(ids.begin(), ids.begin() + 9);
    CHECK_THROWS_AS(synth::make_split(nine, 1, 0), std::invalid_argument);
  }
  SUBCASE("the shuffle is seed-keyed") {
    CHECK(synth::make_split(ids, 1, 7).test == synth::make_split(ids, 1, 7).test);
    CHECK(synth::make_split(ids, 1, 7).test != synth::make_split(ids, 1, 8).test);
  }
}

TEST_CASE("additive noise clamps and stays deterministic") {
  auto sc = scenes::make_scene(1, 12, 12);
  auto rng1 = synth::noise_stream(5, sc.id, 0);
  auto rng2 = synth::noise_stream(5, sc.id, 0);
  RgbImage n1 = synth::add_noise(sc.fogless, 0.3, rng1);
  RgbImage n2 = synth::add_noise(sc.fogless, 0.3, rng2);
  CHECK(images_equal(n1, n2));

  bool changed = false;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < n1.pixels(); ++i) {
      CHECK(n1.plane(c)[i] >= 0.0);
      CHECK(n1.plane(c)[i] <= 1.0);
      changed |= n1.plane(c)[i] != sc.fogless.plane(c)[i];
    }
  CHECK(changed);
}
