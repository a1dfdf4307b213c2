#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "iqa/kernels.hpp"
#include "offsets.hpp"

namespace iqa::kernels::serial {

void filter_separable(std::span<const float> in, Shape shape, std::span<const double> taps_y,
                      std::span<const double> taps_x, std::span<float> out) {
  const int ky = static_cast<int>(taps_y.size()), kx = static_cast<int>(taps_x.size());
  std::vector<double> kernel(static_cast<std::size_t>(ky) * kx);
  for (int i = 0; i < ky; ++i)
    for (int j = 0; j < kx; ++j) kernel[static_cast<std::size_t>(i) * kx + j] = taps_y[i] * taps_x[j];
  serial::filter_2d(in, shape, kernel, ky, kx, out);
}

void filter_2d(std::span<const float> in, Shape shape, std::span<const double> kernel, int kh,
               int kw, std::span<float> out) {
  const int h = shape.height, w = shape.width;
  for (int c = 0; c < shape.channels; ++c) {
    const float* src = in.data() + c * shape.plane();
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int i = 0; i < kh; ++i)
          for (int j = 0; j < kw; ++j) {
            const int yy = reflect_index(y + i - kh / 2, h), xx = reflect_index(x + j - kw / 2, w);
            acc += kernel[static_cast<std::size_t>(i) * kw + j] * src[static_cast<std::size_t>(yy) * w + xx];
          }
        out[c * shape.plane() + static_cast<std::size_t>(y) * w + x] = static_cast<float>(acc);
      }
    }
  }
}

void filter_valid(std::span<const double> in, int h, int w, std::span<const double> taps,
                  std::span<double> out) {
  const int k = static_cast<int>(taps.size());
  const int oh = h - k + 1, ow = w - k + 1;
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          acc += taps[i] * taps[j] * in[static_cast<std::size_t>(y + i) * w + x + j];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
}

void filter_valid_adjoint(std::span<const double> in, int h, int w, std::span<const double> taps,
                          std::span<double> out) {
  const int k = static_cast<int>(taps.size());
  const int oh = h - k + 1, ow = w - k + 1;
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(h) * w, 0.0);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      const double v = in[static_cast<std::size_t>(y) * ow + x];
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) out[static_cast<std::size_t>(y + i) * w + x + j] += taps[i] * taps[j] * v;
    }
}

void l2_pool(std::span<const float> in, Shape shape, std::span<const double> taps, int stride,
             double eps, std::span<float> out) {
  const int h = shape.height, w = shape.width;
  const int oh = ceil_div(h, stride), ow = ceil_div(w, stride);
  const int k = static_cast<int>(taps.size()), r = k / 2;
  for (int c = 0; c < shape.channels; ++c) {
    const float* src = in.data() + c * shape.plane();
    for (int oy = 0; oy < oh; ++oy)
      for (int ox = 0; ox < ow; ++ox) {
        double acc = 0.0;
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) {
            const double v = src[static_cast<std::size_t>(reflect_index(oy * stride + i - r, h)) * w +
                                 reflect_index(ox * stride + j - r, w)];
            acc += taps[i] * taps[j] * v * v;
          }
        out[(static_cast<std::size_t>(c) * oh + oy) * ow + ox] = static_cast<float>(std::sqrt(acc + eps));
      }
  }
}

void max_pool(std::span<const float> in, Shape shape, int k, int stride, std::span<float> out) {
  const int h = shape.height, w = shape.width;
  const int oh = ceil_div(h, stride), ow = ceil_div(w, stride);
  const int r = (k - 1) / 2;
  for (int c = 0; c < shape.channels; ++c)
    for (int oy = 0; oy < oh; ++oy)
      for (int ox = 0; ox < ow; ++ox) {
        float best = -std::numeric_limits<float>::infinity();
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j)
            best = std::max(best, in[c * shape.plane() +
                                     static_cast<std::size_t>(reflect_index(oy * stride + i - r, h)) * w +
                                     reflect_index(ox * stride + j - r, w)]);
        out[(static_cast<std::size_t>(c) * oh + oy) * ow + ox] = best;
      }
}

void swd(std::span<const float> a, std::span<const float> b, Shape shape, int radius,
         std::span<float> out) {
  const int h = shape.height, w = shape.width, ch = shape.channels;
  const std::size_t plane = shape.plane();
  const auto offsets = detail::search_offsets(radius);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t here = static_cast<std::size_t>(y) * w + x;
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_at = here;
      for (const auto& o : offsets) {
        const int yy = y + o.dy, xx = x + o.dx;
        if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
        const std::size_t there = static_cast<std::size_t>(yy) * w + xx;
        double dist = 0.0;
        for (int c = 0; c < ch; ++c) {
          const double d = static_cast<double>(a[c * plane + here]) - b[c * plane + there];
          dist += d * d;
        }
        if (dist < best) {
          best = dist;
          best_at = there;
        }
      }
      for (int c = 0; c < ch; ++c) out[c * plane + here] = a[c * plane + here] - b[c * plane + best_at];
    }
}

void conv2d(std::span<const float> in, Shape shape, std::span<const float> weight,
            std::span<const float> bias, int cout, int k, std::span<float> out) {
  const int h = shape.height, w = shape.width, cin = shape.channels;
  const int r = k / 2;
  for (int co = 0; co < cout; ++co)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double acc = bias[co];
        for (int ci = 0; ci < cin; ++ci)
          for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
              const int yy = y + i - r, xx = x + j - r;
              if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
              acc += static_cast<double>(weight[((static_cast<std::size_t>(co) * cin + ci) * k + i) * k + j]) *
                     in[ci * shape.plane() + static_cast<std::size_t>(yy) * w + xx];
            }
        out[co * shape.plane() + static_cast<std::size_t>(y) * w + x] = static_cast<float>(acc);
      }
}

}  // namespace iqa::kernels::serial
