// fogbench: dataset synthesis, visibility estimation, fog-model inversion,
// defogging, and metric aggregation over sample directories.
//
// Exit codes: 0 success, 2 validation/usage error, 3 numeric or
// identifiability failure. FOGBENCH_SEED, when set, overrides --seed.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "fogbench/colormap.h"
#include "fogbench/dataset.h"
#include "fogbench/estimate.h"
#include "fogbench/image_io.h"
#include "fogbench/invert.h"
#include "fogbench/metrics.h"
#include "fogbench/physics.h"
#include "fogbench/scenes.h"
#include "fogbench/synth.h"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace fogbench;

namespace {

struct Common {
  std::string input;
  std::string output;
  std::uint64_t seed = 0;
  std::string size = "288x512";
  double eps = 0.05;
  double t_min = 1e-2;
  double v_max = 1e5;
  double v_min = 10.0;
  int workers = 1;
  double noise = 0.0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-i,--input", c.input, "Input directory");
  cmd->add_option("-o,--output", c.output, "Output directory");
  cmd->add_option("--seed", c.seed, "RNG seed (FOGBENCH_SEED overrides)")->capture_default_str();
  cmd->add_option("--size", c.size, "Image size as HxW")->capture_default_str();
  cmd->add_option("--eps", c.eps, "Contrast threshold")->capture_default_str();
  cmd->add_option("--t-min", c.t_min, "Transmission floor")->capture_default_str();
  cmd->add_option("--v-max", c.v_max, "Visibility ceiling for the image-wise mask")
      ->capture_default_str();
  cmd->add_option("--v-min", c.v_min, "Fallback visibility when no pixel is usable")
      ->capture_default_str();
  cmd->add_option("--workers", c.workers, "Concurrent per-sample workers")->capture_default_str();
  cmd->add_option("--noise", c.noise, "Gaussian channel noise sigma")->capture_default_str();
}

std::pair<int, int> parse_size(const std::string& s) {
  int h = 0, w = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%dx%d%c", &h, &w, &tail) != 2 || h < 1 || w < 1)
    throw std::invalid_argument("--size must be HxW with positive integers, got '" + s + "'");
  return {h, w};
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error(p.string() + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(p.string() + ": write failed");
}

void write_json(const fs::path& p, const ordered_json& j) { write_text(p, j.dump(2) + "\n"); }

ordered_json load_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error(p.string() + ": cannot open");
  return ordered_json::parse(in);
}

/// Index-sharded worker pool; rethrows the first worker exception.
void run_parallel(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr first;
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!first) first = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int count = std::min<std::size_t>(workers, n);
  for (int t = 0; t < count; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

std::vector<fs::path> require_samples(const fs::path& root) {
  if (root.empty()) throw std::invalid_argument("--input is required");
  auto dirs = dataset::list_sample_dirs(root);
  if (dirs.empty())
    throw std::invalid_argument(root.string() + ": no sample directories (subdirs with meta.json)");
  return dirs;
}

fs::path out_root(const Common& c) { return c.output.empty() ? fs::path(c.input) : fs::path(c.output); }

// --- synthesize ------------------------------------------------------------

std::vector<scenes::Scene> load_scene_dir(const fs::path& root) {
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory() && fs::exists(e.path() / "fogless.png") &&
        fs::exists(e.path() / "depth.pfm"))
      dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty())
    throw std::invalid_argument(root.string() +
                                ": no scene directories (subdirs with fogless.png + depth.pfm)");
  std::vector<scenes::Scene> out;
  out.reserve(dirs.size());
  for (const auto& d : dirs) {
    scenes::Scene sc;
    sc.id = d.filename().string();
    sc.fogless = io::read_png(d / "fogless.png");
    sc.depth = io::read_pfm(d / "depth.pfm");
    if (!sc.fogless.same_shape(sc.depth))
      throw std::invalid_argument(d.string() + ": image and depth shapes differ");
    out.push_back(std::move(sc));
  }
  return out;
}

int cmd_synthesize(const Common& c, int n_scenes, int variants) {
  if (c.output.empty()) throw std::invalid_argument("synthesize: --output is required");
  auto [h, w] = parse_size(c.size);
  Epsilon eps(c.eps);
  std::vector<scenes::Scene> scene_list =
      c.input.empty() ? scenes::make_scenes(n_scenes, h, w) : load_scene_dir(c.input);

  fs::path root(c.output);
  fs::create_directories(root);
  synth::for_each_sample(
      scene_list, variants, c.seed, eps,
      [&](int, int vi, synth::FogSample&& s) {
        dataset::write_sample_dir(root / dataset::sample_dir_name(s.scene_id, vi), s, c.seed,
                                  c.noise);
      },
      c.workers);

  std::vector<std::string> ids;
  ids.reserve(scene_list.size());
  for (const auto& sc : scene_list) ids.push_back(sc.id);
  auto split = synth::make_split(ids, variants, c.seed);
  dataset::write_split(root / "split.json", split);
  std::printf("synthesize: %zu samples (%zu/%zu/%zu train/val/test) -> %s\n",
              scene_list.size() * static_cast<std::size_t>(variants), split.train.size(),
              split.val.size(), split.test.size(), root.string().c_str());
  return 0;
}

// --- estimate --------------------------------------------------------------

int cmd_estimate(const Common& c) {
  vis::EstimationConfig cfg{Epsilon(c.eps), c.t_min, c.v_max, c.v_min};
  cfg.validate();
  auto dirs = require_samples(c.input);
  fs::path root = out_root(c);

  run_parallel(dirs.size(), c.workers, [&](std::size_t i) {
    const fs::path& d = dirs[i];
    fs::path odir = root / d.filename();
    fs::create_directories(odir);
    auto ls = dataset::read_sample_dir(d);

    MaskedField v = vis::pixel_visibility(ls.transmission, ls.depth, cfg.eps);
    Mask mask = vis::visibility_mask(v, ls.transmission, cfg);
    double mean_v = vis::image_visibility(v, ls.transmission, cfg);
    double frac = static_cast<double>(mask.count()) / static_cast<double>(mask.size());

    // Shared scale for the false-color map and the histogram: v_min up to the
    // v_max-clipped largest masked value.
    double vmax_obs = -1.0;
    for (std::size_t p = 0; p < mask.size(); ++p)
      if (mask[p] && v.values[p] > vmax_obs) vmax_obs = v.values[p];
    double lo = cfg.v_min;
    double hi = std::min(cfg.v_max, vmax_obs);
    if (!(hi > lo)) hi = lo + 1.0;

    io::write_pfm(odir / "visibility_map.pfm", v.values);
    io::write_png_bytes(odir / "visibility_map.png", v.values.height(), v.values.width(),
                        colormap::render(v.values, &mask, lo, hi));
    write_json(odir / "visibility_map.png.json", ordered_json{{"lo", lo}, {"hi", hi}});

    auto hist = vis::masked_histogram(v.values, mask, 50, lo, hi);
    std::string csv = "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < hist.counts.size(); ++b) {
      char line[96];
      std::snprintf(line, sizeof(line), "%.17g,%.17g,%lld\n", hist.edges[b], hist.edges[b + 1],
                    static_cast<long long>(hist.counts[b]));
      csv += line;
    }
    write_text(odir / "histogram.csv", csv);

    write_json(odir / "estimate.json", ordered_json{{"image_visibility_m", mean_v},
                                                    {"valid_fraction", frac},
                                                    {"class", vis::classify(mean_v)}});
  });
  std::printf("estimate: %zu samples -> %s\n", dirs.size(), root.string().c_str());
  return 0;
}

// --- invert ----------------------------------------------------------------

int cmd_invert(const Common& c) {
  auto dirs = require_samples(c.input);
  fs::path root = out_root(c);
  invert::FitOptions opt;
  opt.eps = Epsilon(c.eps);
  std::atomic<bool> any_unidentifiable{false};

  run_parallel(dirs.size(), c.workers, [&](std::size_t i) {
    const fs::path& d = dirs[i];
    fs::path odir = root / d.filename();
    fs::create_directories(odir);
    auto ls = dataset::read_sample_dir(d);

    ordered_json j;
    try {
      auto fit = invert::fit_uniform_fog(ls.foggy, ls.fogless, ls.depth, opt);
      j["status"] = "ok";
      j["airlight_rgb"] = {fit.airlight.r, fit.airlight.g, fit.airlight.b};
      j["beta"] = fit.beta;
      j["visibility_m"] = fit.visibility;
      j["residual_rms"] = fit.residual_rms;
      j["iterations"] = fit.iterations;
      j["converged"] = fit.converged;
      const auto& m = ls.meta;
      double gt_beta = physics::beta_from_visibility(m.visibility_m, Epsilon(m.epsilon));
      j["gt"] = ordered_json{
          {"visibility_m", m.visibility_m},
          {"beta", gt_beta},
          {"airlight_rgb", {m.airlight.r, m.airlight.g, m.airlight.b}},
          {"visibility_abs_rel", std::fabs(fit.visibility - m.visibility_m) / m.visibility_m}};
    } catch (const invert::IdentifiabilityError& e) {
      j["status"] = "identifiability_error";
      j["message"] = e.what();
      any_unidentifiable.store(true);
    }
    write_json(odir / "fit.json", j);
  });
  std::printf("invert: %zu samples -> %s\n", dirs.size(), root.string().c_str());
  return any_unidentifiable.load() ? 3 : 0;
}

// --- defog -----------------------------------------------------------------

int cmd_defog(const Common& c) {
  auto dirs = require_samples(c.input);
  fs::path root = out_root(c);

  run_parallel(dirs.size(), c.workers, [&](std::size_t i) {
    const fs::path& d = dirs[i];
    fs::path odir = root / d.filename();
    fs::create_directories(odir);
    auto ls = dataset::read_sample_dir(d);

    MaskedImage res = physics::defog(ls.foggy, ls.meta.airlight, ls.transmission, c.t_min);
    io::write_png_rgba(odir / "defog.png", res.image, res.valid);

    ordered_json j;
    std::size_t n_valid = res.valid.count();
    if (n_valid == 0) {
      j["psnr_db"] = nullptr;
    } else {
      double p = metrics::psnr(res.image, ls.fogless, res.valid);
      if (std::isfinite(p))
        j["psnr_db"] = p;
      else
        j["psnr_db"] = nullptr;  // exact reproduction: unbounded PSNR
    }
    j["valid_fraction"] = static_cast<double>(n_valid) / static_cast<double>(res.valid.size());
    write_json(odir / "defog.json", j);
  });
  std::printf("defog: %zu samples -> %s\n", dirs.size(), root.string().c_str());
  return 0;
}

// --- evaluate --------------------------------------------------------------

int cmd_evaluate(const Common& c, const std::string& pred_dir, const std::string& pred_kind,
                 const std::string& split) {
  auto dirs = require_samples(c.input);
  fs::path pred = pred_dir.empty() ? fs::path(c.input) : fs::path(pred_dir);
  fs::path root = c.output.empty() ? pred : fs::path(c.output);

  if (split != "all") {
    auto manifest = dataset::read_split(fs::path(c.input) / "split.json");
    const auto* part = split == "train" ? &manifest.train
                       : split == "val" ? &manifest.val
                                        : &manifest.test;
    std::unordered_set<std::string> keep;
    for (const auto& [id, v] : *part) keep.insert(dataset::sample_dir_name(id, v));
    std::erase_if(dirs, [&](const fs::path& d) { return !keep.count(d.filename().string()); });
    if (dirs.size() != part->size())
      throw std::invalid_argument("evaluate: split '" + split + "' lists " +
                                  std::to_string(part->size()) + " samples but " +
                                  std::to_string(dirs.size()) + " were found");
  }

  std::vector<double> pred_v, gt_v;
  std::size_t skipped = 0;
  for (const auto& d : dirs) {
    auto meta = dataset::read_meta(d);
    fs::path pf = pred / d.filename() / (pred_kind == "estimate" ? "estimate.json" : "fit.json");
    ordered_json j = load_json(pf);
    if (pred_kind == "invert" && j.at("status").get<std::string>() != "ok") {
      ++skipped;
      continue;
    }
    pred_v.push_back(
        j.at(pred_kind == "estimate" ? "image_visibility_m" : "visibility_m").get<double>());
    gt_v.push_back(meta.visibility_m);
  }
  if (pred_v.empty()) throw std::invalid_argument("evaluate: no usable prediction pairs");

  auto report = metrics::evaluate_pairs(pred_v, gt_v);
  fs::create_directories(root);
  write_text(root / "metrics.json", metrics::serialize_report(report) + "\n");
  std::printf("evaluate: %zu pairs (%zu skipped) -> %s\n", pred_v.size(), skipped,
              (root / "metrics.json").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fog synthesis, visibility estimation, and fog-model inversion toolkit"};
  app.require_subcommand(1);

  Common c_syn, c_est, c_inv, c_def, c_eval;
  int n_scenes = 10, n_variants = 1;
  std::string pred_dir, pred_kind = "estimate", split = "all";

  auto* syn = app.add_subcommand("synthesize", "Generate a foggy dataset with ground truth");
  add_common(syn, c_syn);
  syn->add_option("--scenes", n_scenes, "Procedural scene count (ignored with --input)")
      ->capture_default_str();
  syn->add_option("--variants", n_variants, "Fog variants per scene")->capture_default_str();

  auto* est = app.add_subcommand("estimate", "Per-sample visibility maps and statistics");
  add_common(est, c_est);
  auto* inv = app.add_subcommand("invert", "Fit airlight and extinction per sample");
  add_common(inv, c_inv);
  auto* def = app.add_subcommand("defog", "Invert the fog model back to fog-free images");
  add_common(def, c_def);
  auto* eva = app.add_subcommand("evaluate", "Aggregate predictions into metrics.json");
  add_common(eva, c_eval);
  eva->add_option("--pred", pred_dir, "Predictions root (default: --input)");
  eva->add_option("--pred-kind", pred_kind, "Which prediction files to read")
      ->check(CLI::IsMember({"estimate", "invert"}))
      ->capture_default_str();
  eva->add_option("--split", split, "Dataset split to evaluate")
      ->check(CLI::IsMember({"train", "val", "test", "all"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (const char* s = std::getenv("FOGBENCH_SEED"); s && *s) {
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (errno != 0 || end == s || *end != '\0') {
      std::fprintf(stderr, "error: FOGBENCH_SEED is not a valid unsigned integer: '%s'\n", s);
      return 2;
    }
    for (Common* c : {&c_syn, &c_est, &c_inv, &c_def, &c_eval}) c->seed = v;
  }

  try {
    if (app.got_subcommand(syn)) return cmd_synthesize(c_syn, n_scenes, n_variants);
    if (app.got_subcommand(est)) return cmd_estimate(c_est);
    if (app.got_subcommand(inv)) return cmd_invert(c_inv);
    if (app.got_subcommand(def)) return cmd_defog(c_def);
    if (app.got_subcommand(eva)) return cmd_evaluate(c_eval, pred_dir, pred_kind, split);
  } catch (const invert::IdentifiabilityError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;  // unreachable with require_subcommand(1)
}
