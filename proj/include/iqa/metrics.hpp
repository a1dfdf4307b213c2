#pragma once

#include <string>
#include <string_view>

#include "iqa/image.hpp"

namespace iqa {

enum class Metric { psnr, ssim, ms_ssim };

Metric parse_metric(std::string_view name);
std::string_view metric_name(Metric m);

struct MetricScore {
  double value = 0.0;
  bool higher_is_better = true;
};

struct MetricOptions {
  /// Average the metric over RGB channels instead of scoring luminance.
  bool per_channel = false;
};

/// Gradient of a metric value with respect to the distorted image; same shape
/// as the distorted input.
using GradientField = ImageD;

inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimC1 = 0.01 * 0.01;
inline constexpr double kSsimC2 = 0.03 * 0.03;
inline constexpr int kMsSsimScales = 5;
inline constexpr double kMsSsimWeights[kMsSsimScales] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

/// 10 log10(1 / MSE); +inf for identical inputs.
MetricScore psnr(const Image& ref, const Image& dist, MetricOptions opts = {});
/// Mean SSIM over all valid 11x11 Gaussian windows (sigma 1.5).
MetricScore ssim(const Image& ref, const Image& dist, MetricOptions opts = {});
/// Five-scale SSIM with 2x2 box downsampling between scales. Negative
/// contrast-structure means are floored at zero before exponentiation.
MetricScore ms_ssim(const Image& ref, const Image& dist, MetricOptions opts = {});

MetricScore evaluate(Metric m, const Image& ref, const Image& dist, MetricOptions opts = {});

// Double-precision entry points used by the optimizer and by finite-difference
// checks. Inputs may carry 1 or 3 channels; luminance handling follows `opts`.
double psnr_value(const ImageD& ref, const ImageD& dist, MetricOptions opts = {});
double ssim_value(const ImageD& ref, const ImageD& dist, MetricOptions opts = {});
double ms_ssim_value(const ImageD& ref, const ImageD& dist, MetricOptions opts = {});
double metric_value(Metric m, const ImageD& ref, const ImageD& dist, MetricOptions opts = {});

/// d value / d dist. Supported for psnr and ssim; identical inputs under psnr
/// raise NumericError.
GradientField metric_gradient(Metric m, const ImageD& ref, const ImageD& dist, MetricOptions opts = {});
GradientField metric_gradient(Metric m, const Image& ref, const Image& dist, MetricOptions opts = {});

}  // namespace iqa
