#include "fogbench/synth.h"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "fogbench/physics.h"

namespace fogbench::synth {
namespace {

constexpr std::uint64_t kSplitTag = 0x73706c6974ULL;
constexpr std::uint64_t kSampleTag = 0x73616d70ULL;
constexpr std::uint64_t kNoiseTag = 0x6e6f6973ULL;

}  // namespace

Airlight sample_airlight(rng::Stream& rng) {
  double b = rng.uniform(180.0, 255.0);
  double g = std::min(rng.uniform(b - 5.0, b + 2.0), 255.0);
  double mid = (b + g) / 2.0;
  double r = std::min(rng.uniform(mid - 5.0, mid + 2.0), 255.0);
  return Airlight(r / 255.0, g / 255.0, b / 255.0);
}

FogSample make_sample(const RgbImage& fogless, const ScalarField& depth, rng::Stream& rng,
                      Epsilon eps) {
  if (!fogless.same_shape(depth))
    throw std::invalid_argument("make_sample: image and depth shapes differ");
  FogSample s;
  s.visibility = rng.uniform(10.0, 1000.0);
  s.beta = physics::beta_from_visibility(s.visibility, eps);
  s.epsilon = eps.value;
  s.airlight = sample_airlight(rng);
  s.fogless = fogless;
  s.depth = depth;
  s.transmission = physics::transmission_from_depth(depth, s.beta);
  s.foggy = physics::synthesize(fogless, s.transmission, s.airlight);
  return s;
}

SplitManifest make_split(const std::vector<std::string>& scene_ids, int variants_per_scene,
                        std::uint64_t seed) {
  if (variants_per_scene < 1)
    throw std::invalid_argument("make_split: variants_per_scene must be >= 1");
  std::size_t s = scene_ids.size();
  if (s < 10)
    throw std::invalid_argument("make_split: need at least 10 scenes for a 7:2:1 scene split");

  std::vector<std::size_t> order(s);
  for (std::size_t i = 0; i < s; ++i) order[i] = i;
  rng::Stream shuffle = rng::Stream(seed).substream(kSplitTag, 0);
  for (std::size_t i = s - 1; i > 0; --i) {
    std::size_t j = shuffle.below(i + 1);
    std::swap(order[i], order[j]);
  }

  std::size_t n_train = (7 * s) / 10;
  std::size_t n_val = (2 * s) / 10;
  SplitManifest m;
  auto emit = [&](std::vector<std::pair<std::string, int>>& dst, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      for (int v = 0; v < variants_per_scene; ++v) dst.emplace_back(scene_ids[order[i]], v);
  };
  emit(m.train, 0, n_train);
  emit(m.val, n_train, n_train + n_val);
  emit(m.test, n_train + n_val, s);
  return m;
}

rng::Stream sample_stream(std::uint64_t seed, const std::string& scene_id, int variant_id) {
  return rng::Stream(seed)
      .substream(kSampleTag, rng::hash64(scene_id.c_str()))
      .substream(static_cast<std::uint64_t>(variant_id), 0);
}

rng::Stream noise_stream(std::uint64_t seed, const std::string& scene_id, int variant_id) {
  return sample_stream(seed, scene_id, variant_id).substream(kNoiseTag, 0);
}

void for_each_sample(const std::vector<scenes::Scene>& scene_list, int variants_per_scene,
                     std::uint64_t seed, Epsilon eps,
                     const std::function<void(int, int, FogSample&&)>& fn, int workers) {
  if (variants_per_scene < 1)
    throw std::invalid_argument("for_each_sample: variants_per_scene must be >= 1");
  if (workers < 1) workers = 1;
  const std::size_t total = scene_list.size() * static_cast<std::size_t>(variants_per_scene);

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto work = [&] {
    for (;;) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      int si = static_cast<int>(idx / variants_per_scene);
      int vi = static_cast<int>(idx % variants_per_scene);
      try {
        const auto& sc = scene_list[si];
        rng::Stream rs = sample_stream(seed, sc.id, vi);
        FogSample s = make_sample(sc.fogless, sc.depth, rs, eps);
        s.scene_id = sc.id;
        s.variant_id = vi;
        fn(si, vi, std::move(s));
      } catch (...) {
        std::lock_guard<std::mutex> lk(error_mu);
        if (!first_error) first_error = std::current_exception();
        next.store(total);
        return;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
}

Dataset build_dataset(const std::vector<scenes::Scene>& scene_list, int variants_per_scene,
                      std::uint64_t seed, Epsilon eps) {
  std::vector<std::string> ids;
  ids.reserve(scene_list.size());
  for (const auto& sc : scene_list) ids.push_back(sc.id);

  Dataset d;
  d.split = make_split(ids, variants_per_scene, seed);
  d.samples.resize(scene_list.size() * static_cast<std::size_t>(variants_per_scene));
  for_each_sample(scene_list, variants_per_scene, seed, eps,
                  [&](int si, int vi, FogSample&& s) {
                    d.samples[static_cast<std::size_t>(si) * variants_per_scene + vi] =
                        std::move(s);
                  });
  return d;
}

RgbImage add_noise(const RgbImage& img, double sigma, rng::Stream& rng) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("add_noise: sigma must be >= 0");
  RgbImage out = img;
  if (sigma == 0.0) return out;
  for (int c = 0; c < 3; ++c) {
    double* p = out.plane(c);
    for (std::size_t i = 0; i < out.pixels(); ++i)
      p[i] = std::clamp(p[i] + sigma * rng.normal(), 0.0, 1.0);
  }
  return out;
}

}  // namespace fogbench::synth
