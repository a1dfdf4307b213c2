#include "iqa/distortions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "iqa/errors.hpp"
#include "iqa/kernels.hpp"

namespace iqa {
namespace {

kernels::Shape shape_of(const Image& img) { return {img.channels, img.height, img.width}; }

double snap(double v) {
  const double r = std::round(v);
  return std::abs(v - r) < 1e-9 ? r : v;
}

float bilinear(std::span<const float> plane, int w, int h, double x, double y) {
  x = std::clamp(x, 0.0, static_cast<double>(w - 1));
  y = std::clamp(y, 0.0, static_cast<double>(h - 1));
  const int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
  const double fx = x - x0, fy = y - y0;
  auto at = [&](int yy, int xx) { return static_cast<double>(plane[static_cast<std::size_t>(yy) * w + xx]); };
  const double top = at(y0, x0) * (1.0 - fx) + at(y0, x1) * fx;
  const double bottom = at(y1, x0) * (1.0 - fx) + at(y1, x1) * fx;
  return static_cast<float>(std::clamp(top * (1.0 - fy) + bottom * fy, 0.0, 1.0));
}

}  // namespace

WarpLevel warp_level(int level, std::uint64_t seed) {
  static constexpr std::array<WarpLevel, 4> kLevels{{
      {4, 2.0, 15.0, 0},
      {16, 3.0, 25.0, 0},
      {32, 4.0, 35.0, 0},
      {64, 6.0, 60.0, 0},
  }};
  if (level < 1 || level > 4) throw ArgumentError("warp level must be in 1..4");
  WarpLevel out = kLevels[level - 1];
  out.seed = seed;
  return out;
}

Image gaussian_noise(const Image& img, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ArgumentError("noise sigma must be non-negative");
  validate(img);
  if (sigma == 0.0) return img;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma / 255.0);
  Image out = img;
  for (float& v : out.data) v = static_cast<float>(std::clamp(v + noise(rng), 0.0, 1.0));
  return out;
}

std::vector<double> gaussian_taps(double sigma) {
  if (!(sigma >= 0.0)) throw ArgumentError("blur sigma must be non-negative");
  if (sigma == 0.0) return {1.0};
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    taps[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += taps[i + radius];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

Image gaussian_blur(const Image& img, double sigma) {
  validate(img);
  const auto taps = gaussian_taps(sigma);
  if (taps.size() == 1) return img;
  Image out(img.width, img.height, img.channels);
  kernels::filter_separable(img.data, shape_of(img), taps, taps, out.data);
  for (float& v : out.data) v = std::clamp(v, 0.0f, 1.0f);
  return out;
}

std::vector<double> motion_kernel(int length, double angle_deg, int& size) {
  if (length < 1) throw ArgumentError("motion blur length must be >= 1");
  size = length % 2 == 1 ? length : length + 1;
  const int center = size / 2;
  std::vector<double> kernel(static_cast<std::size_t>(size) * size, 0.0);
  const double theta = angle_deg * std::numbers::pi / 180.0;
  const double cx = std::cos(theta), cy = -std::sin(theta);
  const double weight = 1.0 / length;
  for (int k = 0; k < length; ++k) {
    const double t = k - (length - 1) / 2.0;
    const double px = snap(center + t * cx), py = snap(center + t * cy);
    const int x0 = static_cast<int>(std::floor(px)), y0 = static_cast<int>(std::floor(py));
    const double fx = px - x0, fy = py - y0;
    auto splat = [&](int yy, int xx, double wgt) {
      if (wgt == 0.0) return;
      yy = std::clamp(yy, 0, size - 1);
      xx = std::clamp(xx, 0, size - 1);
      kernel[static_cast<std::size_t>(yy) * size + xx] += weight * wgt;
    };
    splat(y0, x0, (1 - fx) * (1 - fy));
    splat(y0, x0 + 1, fx * (1 - fy));
    splat(y0 + 1, x0, (1 - fx) * fy);
    splat(y0 + 1, x0 + 1, fx * fy);
  }
  return kernel;
}

Image motion_blur(const Image& img, int length, double angle_deg) {
  validate(img);
  int size = 0;
  const auto kernel = motion_kernel(length, angle_deg, size);
  if (size == 1) return img;
  Image out(img.width, img.height, img.channels);
  kernels::filter_2d(img.data, shape_of(img), kernel, size, size, out.data);
  for (float& v : out.data) v = std::clamp(v, 0.0f, 1.0f);
  return out;
}

Vec2 warp_source(Vec2 p, const WarpSpec& spec) {
  const double dx = p.x - spec.center.x, dy = p.y - spec.center.y;
  const double r2 = spec.radius * spec.radius;
  const double d2 = dx * dx + dy * dy;
  if (d2 >= r2) return p;
  const double mx = spec.target.x - spec.center.x, my = spec.target.y - spec.center.y;
  const double inside = r2 - d2;
  const double ratio = inside / (inside + mx * mx + my * my);
  const double factor = ratio * ratio;
  return {p.x - factor * mx, p.y - factor * my};
}

std::vector<WarpSpec> sample_warps(int width, int height, const WarpLevel& level) {
  if (level.points < 0) throw ArgumentError("warp point count must be non-negative");
  if (!(level.radius > 0.0)) throw ArgumentError("warp radius must be positive");
  if (!(level.distance >= 0.0) || level.distance >= level.radius)
    throw ArgumentError("warp distance must lie in [0, radius)");
  if (width <= 2 * level.radius || height <= 2 * level.radius)
    throw ArgumentError("image too small for warp radius " + std::to_string(level.radius));

  std::mt19937_64 rng(level.seed);
  const double xhi = std::max(level.radius, width - 1 - level.radius);
  const double yhi = std::max(level.radius, height - 1 - level.radius);
  std::uniform_real_distribution<double> ux(level.radius, xhi), uy(level.radius, yhi);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<WarpSpec> specs;
  specs.reserve(level.points);
  for (int i = 0; i < level.points; ++i) {
    WarpSpec s;
    s.center = {ux(rng), uy(rng)};
    const double a = angle(rng);
    s.target = {s.center.x + level.distance * std::cos(a), s.center.y + level.distance * std::sin(a)};
    s.radius = level.radius;
    specs.push_back(s);
  }
  return specs;
}

Image apply_warps(const Image& img, const std::vector<WarpSpec>& specs) {
  validate(img);
  Image cur = img;
  for (const WarpSpec& spec : specs) {
    const double mx = spec.target.x - spec.center.x, my = spec.target.y - spec.center.y;
    if (!(spec.radius > 0.0) || mx * mx + my * my >= spec.radius * spec.radius)
      throw ArgumentError("warp target must lie strictly inside the radius");
    Image next = cur;
    const int x0 = std::max(0, static_cast<int>(std::floor(spec.center.x - spec.radius)));
    const int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(spec.center.x + spec.radius)));
    const int y0 = std::max(0, static_cast<int>(std::floor(spec.center.y - spec.radius)));
    const int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(spec.center.y + spec.radius)));
    const double r2 = spec.radius * spec.radius;
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) {
        const double dx = x - spec.center.x, dy = y - spec.center.y;
        if (dx * dx + dy * dy >= r2) continue;
        const Vec2 src = warp_source({static_cast<double>(x), static_cast<double>(y)}, spec);
        for (int c = 0; c < img.channels; ++c)
          next.at(c, y, x) = bilinear(cur.plane(c), img.width, img.height, src.x, src.y);
      }
    cur = std::move(next);
  }
  return cur;
}

Image spatial_warp(const Image& img, const WarpLevel& level) {
  validate(img);
  return apply_warps(img, sample_warps(img.width, img.height, level));
}

}  // namespace iqa
