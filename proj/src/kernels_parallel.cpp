#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "iqa/kernels.hpp"
#include "offsets.hpp"

namespace iqa::kernels {

void filter_separable(std::span<const float> in, Shape shape, std::span<const double> taps_y,
                      std::span<const double> taps_x, std::span<float> out) {
  const int h = shape.height, w = shape.width;
  const int ry = static_cast<int>(taps_y.size()) / 2;
  const int rx = static_cast<int>(taps_x.size()) / 2;
  std::vector<double> tmp(shape.size());

#pragma omp parallel for collapse(2) schedule(static)
  for (int c = 0; c < shape.channels; ++c) {
    for (int y = 0; y < h; ++y) {
      const float* src = in.data() + c * shape.plane() + static_cast<std::size_t>(y) * w;
      double* dst = tmp.data() + c * shape.plane() + static_cast<std::size_t>(y) * w;
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int j = 0; j < static_cast<int>(taps_x.size()); ++j)
          acc += taps_x[j] * src[reflect_index(x + j - rx, w)];
        dst[x] = acc;
      }
    }
  }

#pragma omp parallel for collapse(2) schedule(static)
  for (int c = 0; c < shape.channels; ++c) {
    for (int y = 0; y < h; ++y) {
      const double* src = tmp.data() + c * shape.plane();
      float* dst = out.data() + c * shape.plane() + static_cast<std::size_t>(y) * w;
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int i = 0; i < static_cast<int>(taps_y.size()); ++i)
          acc += taps_y[i] * src[static_cast<std::size_t>(reflect_index(y + i - ry, h)) * w + x];
        dst[x] = static_cast<float>(acc);
      }
    }
  }
}

void filter_2d(std::span<const float> in, Shape shape, std::span<const double> kernel, int kh,
               int kw, std::span<float> out) {
  const int h = shape.height, w = shape.width;
  const int ry = kh / 2, rx = kw / 2;
#pragma omp parallel for collapse(2) schedule(static)
  for (int c = 0; c < shape.channels; ++c) {
    for (int y = 0; y < h; ++y) {
      const float* src = in.data() + c * shape.plane();
      float* dst = out.data() + c * shape.plane() + static_cast<std::size_t>(y) * w;
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int i = 0; i < kh; ++i) {
          const std::size_t row = static_cast<std::size_t>(reflect_index(y + i - ry, h)) * w;
          for (int j = 0; j < kw; ++j) {
            const double k = kernel[static_cast<std::size_t>(i) * kw + j];
            if (k != 0.0) acc += k * src[row + reflect_index(x + j - rx, w)];
          }
        }
        dst[x] = static_cast<float>(acc);
      }
    }
  }
}

void filter_valid(std::span<const double> in, int h, int w, std::span<const double> taps,
                  std::span<double> out) {
  const int k = static_cast<int>(taps.size());
  const int oh = h - k + 1, ow = w - k + 1;
  std::vector<double> tmp(static_cast<std::size_t>(h) * ow);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int j = 0; j < k; ++j) acc += taps[j] * in[static_cast<std::size_t>(y) * w + x + j];
      tmp[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += taps[i] * tmp[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
}

void filter_valid_adjoint(std::span<const double> in, int h, int w, std::span<const double> taps,
                          std::span<double> out) {
  const int k = static_cast<int>(taps.size());
  const int oh = h - k + 1, ow = w - k + 1;
  std::vector<double> tmp(static_cast<std::size_t>(oh) * w);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      const int j0 = std::max(0, x - ow + 1), j1 = std::min(k - 1, x);
      for (int j = j0; j <= j1; ++j) acc += taps[j] * in[static_cast<std::size_t>(y) * ow + x - j];
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const int i0 = std::max(0, y - oh + 1), i1 = std::min(k - 1, y);
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = i0; i <= i1; ++i) acc += taps[i] * tmp[static_cast<std::size_t>(y - i) * w + x];
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
}

void l2_pool(std::span<const float> in, Shape shape, std::span<const double> taps, int stride,
             double eps, std::span<float> out) {
  const int h = shape.height, w = shape.width;
  const int oh = ceil_div(h, stride), ow = ceil_div(w, stride);
  const int k = static_cast<int>(taps.size()), r = k / 2;
  // Horizontal pass over every input row, only at the sampled columns.
  std::vector<double> tmp(static_cast<std::size_t>(shape.channels) * h * ow);
#pragma omp parallel for collapse(2) schedule(static)
  for (int c = 0; c < shape.channels; ++c) {
    for (int y = 0; y < h; ++y) {
      const float* src = in.data() + c * shape.plane() + static_cast<std::size_t>(y) * w;
      double* dst = tmp.data() + (static_cast<std::size_t>(c) * h + y) * ow;
      for (int ox = 0; ox < ow; ++ox) {
        double acc = 0.0;
        for (int j = 0; j < k; ++j) {
          const double v = src[reflect_index(ox * stride + j - r, w)];
          acc += taps[j] * (v * v);
        }
        dst[ox] = acc;
      }
    }
  }
#pragma omp parallel for collapse(2) schedule(static)
  for (int c = 0; c < shape.channels; ++c) {
    for (int oy = 0; oy < oh; ++oy) {
      const double* src = tmp.data() + static_cast<std::size_t>(c) * h * ow;
      float* dst = out.data() + (static_cast<std::size_t>(c) * oh + oy) * ow;
      for (int ox = 0; ox < ow; ++ox) {
        double acc = 0.0;
        for (int i = 0; i < k; ++i)
          acc += taps[i] * src[static_cast<std::size_t>(reflect_index(oy * stride + i - r, h)) * ow + ox];
        dst[ox] = static_cast<float>(std::sqrt(acc + eps));
      }
    }
  }
}

void max_pool(std::span<const float> in, Shape shape, int k, int stride, std::span<float> out) {
  const int h = shape.height, w = shape.width;
  const int oh = ceil_div(h, stride), ow = ceil_div(w, stride);
  const int r = (k - 1) / 2;
#pragma omp parallel for collapse(2) schedule(static)
  for (int c = 0; c < shape.channels; ++c) {
    for (int oy = 0; oy < oh; ++oy) {
      const float* src = in.data() + c * shape.plane();
      float* dst = out.data() + (static_cast<std::size_t>(c) * oh + oy) * ow;
      for (int ox = 0; ox < ow; ++ox) {
        float best = -std::numeric_limits<float>::infinity();
        for (int i = 0; i < k; ++i) {
          const std::size_t row = static_cast<std::size_t>(reflect_index(oy * stride + i - r, h)) * w;
          for (int j = 0; j < k; ++j) best = std::max(best, src[row + reflect_index(ox * stride + j - r, w)]);
        }
        dst[ox] = best;
      }
    }
  }
}

void swd(std::span<const float> a, std::span<const float> b, Shape shape, int radius,
         std::span<float> out) {
  const int h = shape.height, w = shape.width, ch = shape.channels;
  const std::size_t plane = shape.plane();
  const auto offsets = detail::search_offsets(radius);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t here = static_cast<std::size_t>(y) * w + x;
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_at = here;
      for (const auto& o : offsets) {
        const int yy = y + o.dy, xx = x + o.dx;
        if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
        const std::size_t there = static_cast<std::size_t>(yy) * w + xx;
        double dist = 0.0;
        for (int c = 0; c < ch && dist < best; ++c) {
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
}

void conv2d(std::span<const float> in, Shape shape, std::span<const float> weight,
            std::span<const float> bias, int cout, int k, std::span<float> out) {
  const int h = shape.height, w = shape.width, cin = shape.channels;
  const int r = k / 2;
  const std::size_t plane = shape.plane();
#pragma omp parallel for collapse(2) schedule(static)
  for (int co = 0; co < cout; ++co) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = bias[co];
        for (int ci = 0; ci < cin; ++ci) {
          const float* wk = weight.data() + (static_cast<std::size_t>(co) * cin + ci) * k * k;
          const float* src = in.data() + ci * plane;
          for (int i = 0; i < k; ++i) {
            const int yy = y + i - r;
            if (yy < 0 || yy >= h) continue;
            for (int j = 0; j < k; ++j) {
              const int xx = x + j - r;
              if (xx < 0 || xx >= w) continue;
              acc += static_cast<double>(wk[i * k + j]) * src[static_cast<std::size_t>(yy) * w + xx];
            }
          }
        }
        out[co * plane + static_cast<std::size_t>(y) * w + x] = static_cast<float>(acc);
      }
    }
  }
}

}  // namespace iqa::kernels
