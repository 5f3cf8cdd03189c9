#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "fogbench/field.h"

namespace fogbench::metrics {

struct MetricReport {
  double abs_rel = 0.0;
  double sq_rel = 0.0;   // mean of squared relative error
  double rmse = 0.0;
  double rmse_log = 0.0;  // decimal logarithm
  std::optional<double> accuracy;  // set when classification accuracy applies
  std::int64_t valid_count = 0;
};

/// Regression metrics over valid pixels. gt and pred must be strictly
/// positive at valid pixels (relative and log metrics require it); the
/// accuracy field is left unset.
MetricReport regression_metrics(const ScalarField& pred, const ScalarField& gt, const Mask& valid);

/// Fraction of pairs whose 200 m visibility classes agree.
double classification_accuracy(std::span<const double> pred, std::span<const double> gt);

/// Image-wise report over paired per-image visibilities: the four regression
/// metrics plus classification accuracy.
MetricReport evaluate_pairs(std::span<const double> pred, std::span<const double> gt);

/// Flat JSON object: the five metric keys plus valid_count; accuracy is null
/// when unset.
std::string serialize_report(const MetricReport& r);

/// Peak signal-to-noise ratio in dB over valid pixels, unit dynamic range.
double psnr(const RgbImage& a, const RgbImage& b, const Mask& valid);

}  // namespace fogbench::metrics
