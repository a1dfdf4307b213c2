#pragma once

// Data-parallel inner loops shared by the metrics, distortions and feature
// layers. Every kernel has two implementations with the same signature:
//
//   iqa::kernels::         OpenMP-parallel, used by the library
//   iqa::kernels::serial:: straightforward loops, kept as the test reference
//
// Tensors are planar (channel-major, row-major inside a channel).

#include <cstddef>
#include <span>

namespace iqa::kernels {

struct Shape {
  int channels = 1;
  int height = 0;
  int width = 0;
  std::size_t plane() const { return static_cast<std::size_t>(height) * width; }
  std::size_t size() const { return plane() * channels; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Mirror index into [0, n) without repeating the edge sample
/// (..., 2, 1 | 0, 1, ..., n-1 | n-2, ...). Periodic for far-out indices.
inline int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

inline int ceil_div(int a, int b) { return (a + b - 1) / b; }

// ---------------------------------------------------------------------------
// Parallel kernels

/// Same-size correlation of every channel with the outer product of two
/// centered odd-length taps, reflect padded.
void filter_separable(std::span<const float> in, Shape shape, std::span<const double> taps_y,
                      std::span<const double> taps_x, std::span<float> out);

/// Same-size correlation with a dense odd-sized kernel (row-major kh x kw),
/// reflect padded.
void filter_2d(std::span<const float> in, Shape shape, std::span<const double> kernel, int kh,
               int kw, std::span<float> out);

/// "Valid" separable correlation of one double plane with symmetric taps;
/// output is (h - k + 1) x (w - k + 1).
void filter_valid(std::span<const double> in, int h, int w, std::span<const double> taps,
                  std::span<double> out);

/// Adjoint of filter_valid: scatters an (h - k + 1) x (w - k + 1) plane back to
/// h x w.
void filter_valid_adjoint(std::span<const double> in, int h, int w, std::span<const double> taps,
                          std::span<double> out);

/// sqrt(g (*) (x . x) + eps) sampled every `stride` cells, g = taps_outer(taps).
/// Output spatial dims are ceil(h / stride) x ceil(w / stride).
void l2_pool(std::span<const float> in, Shape shape, std::span<const double> taps, int stride,
             double eps, std::span<float> out);

/// Max over a centered k x k window (reflect padded) every `stride` cells.
void max_pool(std::span<const float> in, Shape shape, int k, int stride, std::span<float> out);

/// out[:, y, x] = a[:, y, x] - b[:, y', x'] for the (y', x') within the
/// clamped (2r+1)^2 window minimizing the channel-vector l2 distance. Ties go
/// to the smaller |dy|+|dx|, then row-major offset order.
void swd(std::span<const float> a, std::span<const float> b, Shape shape, int radius,
         std::span<float> out);

/// Zero-padded "same" convolution (cross-correlation), weights laid out
/// [cout][cin][k][k].
void conv2d(std::span<const float> in, Shape shape, std::span<const float> weight,
            std::span<const float> bias, int cout, int k, std::span<float> out);

// ---------------------------------------------------------------------------
// Serial reference kernels

namespace serial {

void filter_separable(std::span<const float> in, Shape shape, std::span<const double> taps_y,
                      std::span<const double> taps_x, std::span<float> out);
void filter_2d(std::span<const float> in, Shape shape, std::span<const double> kernel, int kh,
               int kw, std::span<float> out);
void filter_valid(std::span<const double> in, int h, int w, std::span<const double> taps,
                  std::span<double> out);
void filter_valid_adjoint(std::span<const double> in, int h, int w, std::span<const double> taps,
                          std::span<double> out);
void l2_pool(std::span<const float> in, Shape shape, std::span<const double> taps, int stride,
             double eps, std::span<float> out);
void max_pool(std::span<const float> in, Shape shape, int k, int stride, std::span<float> out);
void swd(std::span<const float> a, std::span<const float> b, Shape shape, int radius,
         std::span<float> out);
void conv2d(std::span<const float> in, Shape shape, std::span<const float> weight,
            std::span<const float> bias, int cout, int k, std::span<float> out);

}  // namespace serial

}  // namespace iqa::kernels
