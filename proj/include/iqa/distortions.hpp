#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "iqa/image.hpp"

namespace iqa {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// One local warp: pixels within `radius` of `center` are pulled along
/// `target - center`. Requires radius > 0 and |target - center| < radius.
struct WarpSpec {
  Vec2 center;
  Vec2 target;
  double radius = 1.0;
};

struct WarpLevel {
  int points = 4;          // number of warps
  double distance = 2.0;   // |target - center|, pixels
  double radius = 15.0;
  std::uint64_t seed = 0;
};

/// Preset levels 1..4: (points, distance, radius) = (4,2,15), (16,3,25),
/// (32,4,35), (64,6,60).
WarpLevel warp_level(int level, std::uint64_t seed);

/// Additive i.i.d. Gaussian noise; `sigma` on the 0-255 scale. Output clamped.
Image gaussian_noise(const Image& img, double sigma, std::uint64_t seed);

/// Normalized 1-D Gaussian taps of radius ceil(3 sigma); {1} when sigma == 0.
std::vector<double> gaussian_taps(double sigma);

/// Separable Gaussian blur, `sigma` in pixels, reflect-padded.
Image gaussian_blur(const Image& img, double sigma);

/// Row-major (size x size) line kernel, unit sum. `angle_deg` is measured
/// counter-clockwise from the +x axis (image y points down).
std::vector<double> motion_kernel(int length, double angle_deg, int& size);

Image motion_blur(const Image& img, int length, double angle_deg);

/// Source location sampled for target pixel `p` under `spec`
/// (identity outside the radius).
Vec2 warp_source(Vec2 p, const WarpSpec& spec);

/// Random warps for `level` on a width x height image; centers keep at least
/// `radius` from every border.
std::vector<WarpSpec> sample_warps(int width, int height, const WarpLevel& level);

/// Applies `specs` one after another, bilinear resampling each time.
Image apply_warps(const Image& img, const std::vector<WarpSpec>& specs);

Image spatial_warp(const Image& img, const WarpLevel& level);

}  // namespace iqa
