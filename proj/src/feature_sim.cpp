#include "iqa/feature_sim.hpp"

#include <cmath>
#include <numbers>

#include "iqa/errors.hpp"

namespace iqa {

std::vector<double> hanning_taps(int size) {
  std::vector<double> taps(size);
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double s = std::sin(std::numbers::pi * (i + 1) / (size + 1));
    taps[i] = s * s;
    sum += taps[i];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

FeatureMap l2_pool(const FeatureMap& f, int kernel_size, int stride) {
  if (kernel_size < 3 || kernel_size % 2 == 0) throw ArgumentError("l2_pool kernel size must be odd and >= 3");
  if (stride < 1) throw ArgumentError("l2_pool stride must be >= 1");
  const auto taps = hanning_taps(kernel_size);
  FeatureMap out(f.channels, kernels::ceil_div(f.height, stride), kernels::ceil_div(f.width, stride));
  kernels::l2_pool(f.data, f.shape(), taps, stride, kPoolEpsilon, out.data);
  return out;
}

FeatureMap max_pool(const FeatureMap& f, int kernel_size, int stride) {
  if (kernel_size < 1 || stride < 1) throw ArgumentError("max_pool needs positive kernel and stride");
  FeatureMap out(f.channels, kernels::ceil_div(f.height, stride), kernels::ceil_div(f.width, stride));
  kernels::max_pool(f.data, f.shape(), kernel_size, stride, out.data);
  return out;
}

FeatureMap swd(const FeatureMap& a, const FeatureMap& b, int radius) {
  if (!(a.shape() == b.shape())) throw ArgumentError("swd inputs differ in shape");
  if (radius < 0) throw ArgumentError("swd radius must be non-negative");
  FeatureMap out(a.channels, a.height, a.width);
  kernels::swd(a.data, b.data, a.shape(), radius, out.data);
  return out;
}

}  // namespace iqa
