#pragma once

#include <span>
#include <vector>

#include "iqa/kernels.hpp"

namespace iqa {

/// Multi-channel feature map, planar like Image but unrestricted in range.
struct FeatureMap {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;

  FeatureMap() = default;
  FeatureMap(int c, int h, int w, float fill = 0.0f)
      : channels(c), height(h), width(w), data(static_cast<std::size_t>(c) * h * w, fill) {}

  kernels::Shape shape() const { return {channels, height, width}; }
  float& at(int c, int y, int x) { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }
  float at(int c, int y, int x) const { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;
};

inline constexpr int kDefaultPoolKernel = 5;
inline constexpr int kDefaultPoolStride = 2;
inline constexpr double kPoolEpsilon = 1e-12;
inline constexpr int kDefaultSwdRadius = 3;

/// Interior of a Hanning window of length size+2 (endpoints are zero and are
/// dropped), normalized to unit sum.
std::vector<double> hanning_taps(int size);

/// sqrt(g (*) (f . f) + eps) with a separable unit-sum Hanning window,
/// reflect padding, sampled every `stride` cells.
FeatureMap l2_pool(const FeatureMap& f, int kernel_size = kDefaultPoolKernel,
                   int stride = kDefaultPoolStride);

/// Reference max pooling with the same centering and padding as l2_pool.
FeatureMap max_pool(const FeatureMap& f, int kernel_size = 3, int stride = kDefaultPoolStride);

/// Space warping difference: f_A at each cell minus the best-matching f_B
/// vector within a (2d+1)^2 window (clamped at borders).
FeatureMap swd(const FeatureMap& a, const FeatureMap& b, int radius = kDefaultSwdRadius);

}  // namespace iqa
