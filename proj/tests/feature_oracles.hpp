#pragma once

#include <cmath>
#include <limits>
#include <random>

#include "iqa/feature_sim.hpp"

namespace iqa::test {

inline FeatureMap random_map(int c, int h, int w, std::uint64_t seed, float lo = 0.0f, float hi = 1.0f) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(lo, hi);
  FeatureMap f(c, h, w);
  for (float& v : f.data) v = u(rng);
  return f;
}

/// Circular shift by (dy, dx): out[y][x] = in[y - dy][x - dx].
inline FeatureMap circular_shift(const FeatureMap& f, int dy, int dx) {
  FeatureMap out(f.channels, f.height, f.width);
  for (int c = 0; c < f.channels; ++c)
    for (int y = 0; y < f.height; ++y)
      for (int x = 0; x < f.width; ++x)
        out.at(c, y, x) = f.at(c, ((y - dy) % f.height + f.height) % f.height, ((x - dx) % f.width + f.width) % f.width);
  return out;
}

/// Exhaustive window search written independently of the library: scans
/// every offset, keeps the strictly smaller distance, and on equal distance
/// prefers the smaller |dy|+|dx|, then the earlier row-major offset.
inline FeatureMap swd_oracle(const FeatureMap& a, const FeatureMap& b, int d) {
  FeatureMap out(a.channels, a.height, a.width);
  for (int y = 0; y < a.height; ++y)
    for (int x = 0; x < a.width; ++x) {
      double best = std::numeric_limits<double>::infinity();
      int best_l1 = 0, by = y, bx = x;
      for (int dy = -d; dy <= d; ++dy)
        for (int dx = -d; dx <= d; ++dx) {
          const int yy = y + dy, xx = x + dx;
          if (yy < 0 || yy >= a.height || xx < 0 || xx >= a.width) continue;
          double dist = 0.0;
          for (int c = 0; c < a.channels; ++c) {
            const double e = static_cast<double>(a.at(c, y, x)) - b.at(c, yy, xx);
            dist += e * e;
          }
          const int l1 = std::abs(dy) + std::abs(dx);
          if (dist < best || (dist == best && l1 < best_l1)) {
            best = dist;
            best_l1 = l1;
            by = yy;
            bx = xx;
          }
        }
      for (int c = 0; c < a.channels; ++c) out.at(c, y, x) = a.at(c, y, x) - b.at(c, by, bx);
    }
  return out;
}

/// Relative Frobenius change between two equally shaped maps, skipping a
/// `border`-cell frame.
inline double relative_change(const FeatureMap& a, const FeatureMap& b, int border = 0) {
  double num = 0.0, den = 0.0;
  for (int c = 0; c < a.channels; ++c)
    for (int y = border; y < a.height - border; ++y)
      for (int x = border; x < a.width - border; ++x) {
        const double d = static_cast<double>(a.at(c, y, x)) - b.at(c, y, x);
        num += d * d;
        den += static_cast<double>(a.at(c, y, x)) * a.at(c, y, x);
      }
  return std::sqrt(num / den);
}

}  // namespace iqa::test
