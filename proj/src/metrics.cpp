#include "fogbench/metrics.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "fogbench/estimate.h"
#include "fogbench/kernels.h"

namespace fogbench::metrics {
namespace {

MetricReport accumulate(const double* pred, const double* gt, const std::uint8_t* valid,
                        std::size_t n) {
  double abs_rel = 0.0, sq_rel = 0.0, sq = 0.0, sq_log = 0.0;
  std::int64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (valid && !valid[i]) continue;
    if (!(gt[i] > 0.0)) throw std::domain_error("regression_metrics: gt must be > 0");
    if (!(pred[i] > 0.0)) throw std::domain_error("regression_metrics: pred must be > 0");
    double d = pred[i] - gt[i];
    double rel = d / gt[i];
    abs_rel += std::fabs(rel);
    sq_rel += rel * rel;
    sq += d * d;
    double dl = std::log10(pred[i]) - std::log10(gt[i]);
    sq_log += dl * dl;
    count += 1;
  }
  if (count == 0) throw std::invalid_argument("regression_metrics: empty mask");
  MetricReport r;
  auto c = static_cast<double>(count);
  r.abs_rel = abs_rel / c;
  r.sq_rel = sq_rel / c;
  r.rmse = std::sqrt(sq / c);
  r.rmse_log = std::sqrt(sq_log / c);
  r.valid_count = count;
  return r;
}

}  // namespace

MetricReport regression_metrics(const ScalarField& pred, const ScalarField& gt,
                                const Mask& valid) {
  if (!pred.same_shape(gt) || pred.height() != valid.height() || pred.width() != valid.width())
    throw std::invalid_argument("regression_metrics: shapes differ");
  return accumulate(pred.data(), gt.data(), valid.data(), pred.size());
}

double classification_accuracy(std::span<const double> pred, std::span<const double> gt) {
  if (pred.size() != gt.size())
    throw std::invalid_argument("classification_accuracy: lists differ in length");
  if (pred.empty()) throw std::invalid_argument("classification_accuracy: empty lists");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (vis::classify(pred[i]) == vis::classify(gt[i])) ++hits;
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

MetricReport evaluate_pairs(std::span<const double> pred, std::span<const double> gt) {
  if (pred.size() != gt.size())
    throw std::invalid_argument("evaluate_pairs: lists differ in length");
  if (pred.empty()) throw std::invalid_argument("evaluate_pairs: empty lists");
  MetricReport r = accumulate(pred.data(), gt.data(), nullptr, pred.size());
  r.accuracy = classification_accuracy(pred, gt);
  return r;
}

std::string serialize_report(const MetricReport& r) {
  nlohmann::json j;
  j["abs_rel"] = r.abs_rel;
  j["sq_rel"] = r.sq_rel;
  j["rmse"] = r.rmse;
  j["rmse_log"] = r.rmse_log;
  if (r.accuracy)
    j["accuracy"] = *r.accuracy;
  else
    j["accuracy"] = nullptr;
  j["valid_count"] = r.valid_count;
  return j.dump(2);
}

double psnr(const RgbImage& a, const RgbImage& b, const Mask& valid) {
  if (!a.same_shape(b) || a.height() != valid.height() || a.width() != valid.width())
    throw std::invalid_argument("psnr: shapes differ");
  const auto& k = kernels::active_kernels();
  double sum = 0.0;
  std::int64_t count = 0;
  for (int c = 0; c < 3; ++c) {
    auto sc = k.sum_sq_diff_masked(a.plane(c), b.plane(c), valid.data(), a.pixels());
    sum += sc.sum;
    count += sc.count;
  }
  if (count == 0) throw std::invalid_argument("psnr: empty mask");
  double mse = sum / static_cast<double>(count);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(mse);
}

}  // namespace fogbench::metrics
