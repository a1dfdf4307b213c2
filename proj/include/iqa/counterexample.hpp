#pragma once

#include <string>
#include <vector>

#include "iqa/image.hpp"
#include "iqa/metrics.hpp"

namespace iqa {

enum class Direction { maximize, minimize };
Direction parse_direction(std::string_view s);

/// Step size that makes steady progress on 32x32 to 256x256 images: 0.01
/// for psnr, 1.0 for ssim (its gradient is spread over every pixel).
double default_step(Metric metric);

struct PgdConfig {
  int steps = 200;
  double alpha = 1e-3;
  Direction direction = Direction::maximize;
  bool keep_best = true;
  MetricOptions metric;
};

struct PgdStep {
  int step = 0;
  double objective = 0.0;
  /// ||x - I_R||^2 - a; feasible iterates have residual <= 0 (up to 1e-9).
  double residual = 0.0;
};

struct PgdResult {
  Image x;
  std::vector<PgdStep> trajectory;  // step 0 is the initial image
  double initial_objective = 0.0;
  double final_objective = 0.0;    // objective of the returned x
  double radius_sq = 0.0;          // a = ||I_i - I_R||^2
};

double squared_distance(const ImageD& a, const ImageD& b);

/// Euclidean projection onto {x : ||x - center||^2 <= radius_sq}.
ImageD project_to_ball(const ImageD& y, const ImageD& center, double radius_sq);
Image project_to_ball(const Image& y, const Image& center, double radius_sq);

/// Projected gradient ascent/descent on `metric` (psnr or ssim) starting from
/// `initial`, constrained to the MSE ball around `reference` whose radius is
/// set by `initial`. Each step: gradient step, ball projection, [0,1] clamp.
PgdResult generate_counterexample(Metric metric, const Image& reference, const Image& initial,
                                  const PgdConfig& config);

/// CSV `step,objective,residual`.
std::string trajectory_csv(const PgdResult& result);

}  // namespace iqa
