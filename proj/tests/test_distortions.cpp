#include <gtest/gtest.h>

#include <cmath>

#include "iqa/distortions.hpp"
#include "iqa/errors.hpp"
#include "test_util.hpp"

namespace iqa {
namespace {

TEST(Noise, ZeroSigmaIsIdentity) {
  const Image img = test::random_image(8, 8, 3, 1);
  EXPECT_EQ(gaussian_noise(img, 0.0, 5), img);
}

TEST(Noise, SeededDeterminism) {
  const Image img = test::random_image(16, 16, 1, 2);
  EXPECT_EQ(gaussian_noise(img, 15.0, 9), gaussian_noise(img, 15.0, 9));
  EXPECT_NE(gaussian_noise(img, 15.0, 9), gaussian_noise(img, 15.0, 10));
}

TEST(Noise, RejectsNegativeSigma) {
  EXPECT_THROW(gaussian_noise(Image(2, 2, 1), -1.0, 0), ArgumentError);
}

TEST(Noise, SampleStdMatchesSigma) {
  const Image gray(256, 256, 1, 0.5f);
  const Image out = gaussian_noise(gray, 25.0, 123);
  double sum = 0.0, sq = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const float v = out.data[i];
    if (v <= 0.0f || v >= 1.0f) continue;
    const double d = static_cast<double>(v) - 0.5;
    sum += d;
    sq += d * d;
    ++n;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  EXPECT_NEAR(sd, 25.0 / 255.0, 0.05 * 25.0 / 255.0);
  validate(out);
}

TEST(Blur, ZeroSigmaAndConstants) {
  const Image img = test::random_image(9, 7, 3, 3);
  EXPECT_EQ(gaussian_blur(img, 0.0), img);
  const Image flat(12, 10, 3, 0.37f);
  const Image out = gaussian_blur(flat, 2.0);
  for (float v : out.data) EXPECT_NEAR(v, 0.37f, 1e-6);
}

TEST(Blur, ImpulseCenterEqualsKernelPeak) {
  Image img(15, 15, 1);
  img.at(0, 7, 7) = 1.0f;
  const Image out = gaussian_blur(img, 1.0);
  // Independent evaluation: peak of the normalized 1-D kernel, squared.
  double sum = 0.0;
  for (int i = -3; i <= 3; ++i) sum += std::exp(-0.5 * i * i);
  EXPECT_NEAR(out.at(0, 7, 7), (1.0 / sum) * (1.0 / sum), 1e-6);
  EXPECT_EQ(gaussian_taps(1.0).size(), 7u);
}

TEST(Blur, CommutesWithHorizontalFlip) {
  const Image img = test::random_image(21, 13, 3, 4);
  const Image a = gaussian_blur(flip_horizontal(img), 1.7);
  const Image b = flip_horizontal(gaussian_blur(img, 1.7));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.data[i], b.data[i], 1e-6);
}

TEST(MotionBlur, LengthOneIsIdentity) {
  const Image img = test::random_image(8, 8, 1, 5);
  EXPECT_EQ(motion_blur(img, 1, 37.0), img);
}

TEST(MotionBlur, KernelHasUnitSum) {
  for (double angle : {0.0, 30.0, 45.0, 90.0, 133.0}) {
    int size = 0;
    const auto k = motion_kernel(9, angle, size);
    double s = 0.0;
    for (double v : k) s += v;
    EXPECT_NEAR(s, 1.0, 1e-12) << angle;
  }
}

TEST(MotionBlur, ConstantsUnchanged) {
  const Image flat(16, 16, 3, 0.6f);
  const Image out = motion_blur(flat, 7, 30.0);
  for (float v : out.data) EXPECT_NEAR(v, 0.6f, 1e-6);
}

TEST(MotionBlur, HorizontalEdgeSpreadsOverThreeColumns) {
  Image img(10, 4, 1);
  for (int y = 0; y < 4; ++y)
    for (int x = 5; x < 10; ++x) img.at(0, y, x) = 1.0f;
  const Image out = motion_blur(img, 3, 0.0);
  // 1-D oracle: [0 0 0 0 0 1 1 1 1 1] convolved with [1 1 1]/3.
  const float expect[10] = {0, 0, 0, 0, 1.0f / 3, 2.0f / 3, 1, 1, 1, 1};
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 10; ++x) EXPECT_NEAR(out.at(0, y, x), expect[x], 1e-6) << x;
}

TEST(Warp, FormulaWorkedExample) {
  const WarpSpec s{{0.0, 0.0}, {1.0, 0.0}, 2.0};
  const Vec2 u = warp_source({0.0, 0.0}, s);
  EXPECT_NEAR(u.x, -0.64, 1e-12);
  EXPECT_NEAR(u.y, 0.0, 1e-12);
}

TEST(Warp, BoundaryAndOutsideAreFixed) {
  const WarpSpec s{{10.0, 10.0}, {12.0, 10.0}, 5.0};
  const Vec2 on = warp_source({15.0, 10.0}, s);
  EXPECT_EQ(on.x, 15.0);
  EXPECT_EQ(on.y, 10.0);
  const Vec2 out = warp_source({20.0, 3.0}, s);
  EXPECT_EQ(out.x, 20.0);
}

TEST(Warp, ZeroDistanceIsIdentity) {
  const Image img = test::random_image(40, 40, 3, 6);
  WarpLevel lvl{5, 0.0, 10.0, 3};
  EXPECT_EQ(spatial_warp(img, lvl), img);
}

TEST(Warp, PixelsOutsideEveryRadiusAreUntouched) {
  const Image img = test::random_image(96, 80, 3, 7);
  const WarpLevel lvl = warp_level(2, 11);
  const auto specs = sample_warps(img.width, img.height, lvl);
  const Image out = apply_warps(img, specs);
  std::size_t checked = 0;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      bool outside = true;
      for (const auto& s : specs) {
        const double dx = x - s.center.x, dy = y - s.center.y;
        outside = outside && dx * dx + dy * dy >= s.radius * s.radius;
      }
      if (!outside) continue;
      ++checked;
      for (int c = 0; c < 3; ++c) ASSERT_EQ(out.at(c, y, x), img.at(c, y, x));
    }
  EXPECT_GT(checked, 0u);
  EXPECT_EQ(spatial_warp(img, lvl), out);
}

TEST(Warp, LevelTableAndPlacement) {
  const int expect[4][3] = {{4, 2, 15}, {16, 3, 25}, {32, 4, 35}, {64, 6, 60}};
  for (int l = 1; l <= 4; ++l) {
    const WarpLevel w = warp_level(l, 1);
    EXPECT_EQ(w.points, expect[l - 1][0]);
    EXPECT_EQ(w.distance, expect[l - 1][1]);
    EXPECT_EQ(w.radius, expect[l - 1][2]);
    for (const auto& s : sample_warps(288, 288, w)) {
      EXPECT_GE(s.center.x, w.radius);
      EXPECT_LE(s.center.x, 287 - w.radius);
      EXPECT_GE(s.center.y, w.radius);
      EXPECT_NEAR(std::hypot(s.target.x - s.center.x, s.target.y - s.center.y), w.distance, 1e-9);
    }
  }
  EXPECT_THROW(warp_level(5, 0), ArgumentError);
}

TEST(Warp, TooSmallImageRejected) {
  EXPECT_THROW(spatial_warp(Image(40, 40, 1), warp_level(4, 0)), ArgumentError);
}

TEST(Warp, OutputStaysValid) {
  const Image img = test::random_image(128, 128, 3, 8);
  validate(spatial_warp(img, warp_level(3, 2)));
}

}  // namespace
}  // namespace iqa
