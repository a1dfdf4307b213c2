#include "iqa/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "iqa/errors.hpp"

namespace iqa {
namespace {

void check_shapes(const ImageD& a, const ImageD& b) {
  if (!a.same_shape(b)) throw ArgumentError("images differ in shape");
}

// Float image whose every sample is at least as close to `center` as the
// double value it came from, so rounding never leaves the ball.
Image round_toward(const ImageD& x, const Image& center) {
  Image out(x.width, x.height, x.channels);
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    const double v = std::clamp(x.data[i], 0.0, 1.0);
    float f = static_cast<float>(v);
    const float c = center.data[i];
    if (std::abs(static_cast<double>(f) - c) > std::abs(v - c)) f = std::nextafter(f, c);
    out.data[i] = f;
  }
  return out;
}

bool better(double candidate, double incumbent, Direction d) {
  return d == Direction::maximize ? candidate > incumbent : candidate < incumbent;
}

}  // namespace

Direction parse_direction(std::string_view s) {
  if (s == "maximize" || s == "max") return Direction::maximize;
  if (s == "minimize" || s == "min") return Direction::minimize;
  throw ArgumentError("direction must be maximize or minimize");
}

double default_step(Metric metric) { return metric == Metric::ssim ? 1.0 : 0.01; }

double squared_distance(const ImageD& a, const ImageD& b) {
  check_shapes(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    acc += d * d;
  }
  return acc;
}

ImageD project_to_ball(const ImageD& y, const ImageD& center, double radius_sq) {
  check_shapes(y, center);
  if (!(radius_sq >= 0.0)) throw ArgumentError("ball radius must be non-negative");
  const double d2 = squared_distance(y, center);
  if (d2 <= radius_sq) return y;
  const double scale = std::sqrt(radius_sq / d2);
  ImageD out = center;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += (y.data[i] - center.data[i]) * scale;
  return out;
}

Image project_to_ball(const Image& y, const Image& center, double radius_sq) {
  return round_toward(project_to_ball(to_double(y), to_double(center), radius_sq), center);
}

PgdResult generate_counterexample(Metric metric, const Image& reference, const Image& initial,
                                  const PgdConfig& config) {
  validate(reference);
  validate(initial);
  if (!reference.same_shape(initial)) throw ArgumentError("reference and initial image differ in shape");
  if (config.steps < 1) throw ArgumentError("steps must be >= 1");
  if (!(config.alpha > 0.0)) throw ArgumentError("alpha must be positive");
  if (metric == Metric::ms_ssim) throw ArgumentError("ms_ssim has no gradient; use psnr or ssim");

  const ImageD ref = to_double(reference);
  ImageD x = to_double(initial);
  const double a = squared_distance(x, ref);
  if (metric == Metric::psnr && a == 0.0) throw ArgumentError("psnr counter-examples need initial != reference");

  const double sign = config.direction == Direction::maximize ? 1.0 : -1.0;
  auto objective = [&](const ImageD& img) { return metric_value(metric, ref, img, config.metric); };

  PgdResult res;
  res.radius_sq = a;
  res.initial_objective = objective(x);
  res.trajectory.push_back({0, res.initial_objective, 0.0});
  ImageD best = x;
  double best_obj = res.initial_objective;

  for (int k = 1; k <= config.steps; ++k) {
    GradientField g;
    try {
      g = metric_gradient(metric, ref, x, config.metric);
    } catch (const NumericError& e) {
      throw NumericError("step " + std::to_string(k) + ": " + e.what());
    }
    ImageD y = x;
    for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] += sign * config.alpha * g.data[i];
    x = project_to_ball(y, ref, a);
    // ref lies in [0,1], so clamping moves each sample toward it.
    for (double& v : x.data) v = std::clamp(v, 0.0, 1.0);

    const double obj = objective(x);
    if (!std::isfinite(obj)) throw NumericError("step " + std::to_string(k) + ": non-finite objective");
    res.trajectory.push_back({k, obj, squared_distance(x, ref) - a});
    if (!config.keep_best || better(obj, best_obj, config.direction)) {
      best = x;
      best_obj = obj;
    }
  }

  res.x = round_toward(best, reference);
  res.final_objective = objective(to_double(res.x));
  if (config.keep_best && better(res.initial_objective, res.final_objective, config.direction)) {
    res.x = initial;
    res.final_objective = res.initial_objective;
  }
  return res;
}

std::string trajectory_csv(const PgdResult& result) {
  std::ostringstream out;
  out << "step,objective,residual\n";
  out.precision(12);
  for (const PgdStep& s : result.trajectory) out << s.step << ',' << s.objective << ',' << s.residual << '\n';
  return out.str();
}

}  // namespace iqa
