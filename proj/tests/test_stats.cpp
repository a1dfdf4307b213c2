#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "iqa/errors.hpp"
#include "iqa/stats.hpp"

using namespace iqa::stats;

namespace {

using LD = long double;

LD pearson_oracle(const std::vector<LD>& x, const std::vector<LD>& y) {
  const std::size_t n = x.size();
  LD mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= n, my /= n;
  LD sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Rank by counting: 1 + (#smaller) + (#equal - 1) / 2.
std::vector<LD> rank_oracle(const std::vector<double>& x) {
  std::vector<LD> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    int less = 0, equal = 0;
    for (double v : x) less += v < x[i], equal += v == x[i];
    r[i] = 1 + less + (equal - 1) / 2.0L;
  }
  return r;
}

LD srcc_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson_oracle(rank_oracle(x), rank_oracle(y));
}

// Tau-b from all pairs.
LD krcc_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  long conc = 0, disc = 0, tx = 0, ty = 0, pairs = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      ++pairs;
      const int sx = (x[i] > x[j]) - (x[i] < x[j]), sy = (y[i] > y[j]) - (y[i] < y[j]);
      if (sx == 0) ++tx;
      if (sy == 0) ++ty;
      if (sx * sy > 0) ++conc;
      if (sx * sy < 0) ++disc;
    }
  return (conc - disc) / std::sqrt(static_cast<LD>(pairs - tx) * (pairs - ty));
}

bool non_constant(const std::vector<double>& v) {
  for (double x : v)
    if (x != v[0]) return true;
  return false;
}

// Cubic least squares via normal equations on a centered, scaled axis,
// solved by Gaussian elimination with partial pivoting in long double.
std::vector<LD> cubic_fit_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  LD mean = 0, spread = 0;
  for (double v : x) mean += v;
  mean /= n;
  for (double v : x) spread = std::max(spread, std::fabs(v - mean));
  LD a[4][5] = {};
  for (std::size_t i = 0; i < n; ++i) {
    const LD t = (x[i] - mean) / spread;
    LD p[4] = {1, t, t * t, t * t * t};
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) a[r][c] += p[r] * p[c];
      a[r][4] += p[r] * y[i];
    }
  }
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const LD f = a[r][col] / a[col][col];
      for (int c = col; c < 5; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<LD> fitted(n);
  for (std::size_t i = 0; i < n; ++i) {
    const LD t = (x[i] - mean) / spread;
    fitted[i] = a[0][4] / a[0][0] + a[1][4] / a[1][1] * t + a[2][4] / a[2][2] * t * t + a[3][4] / a[3][3] * t * t * t;
  }
  return fitted;
}

}  // namespace

TEST(Stats, FractionalRanks) {
  const std::vector<double> x{3, 1, 3, 2, 3};
  EXPECT_EQ(fractional_ranks(x), (std::vector<double>{4, 1, 4, 2, 4}));
}

TEST(Stats, RankCorrelationsMatchBruteForce) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> len(2, 8), level(0, 5);
  std::uniform_real_distribution<double> real(-1, 1);
  int checked = 0;
  while (checked < 1000) {
    const int n = len(rng);
    const bool with_ties = checked % 2 == 0;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = with_ties ? level(rng) : real(rng);
      y[i] = with_ties ? level(rng) : real(rng);
    }
    if (!non_constant(x) || !non_constant(y)) continue;
    ++checked;
    EXPECT_NEAR(srcc(x, y), static_cast<double>(srcc_oracle(x, y)), 1e-12);
    EXPECT_NEAR(krcc(x, y), static_cast<double>(krcc_oracle(x, y)), 1e-12);
  }
}

TEST(Stats, KrccMatchesBruteForceOnLongerVectors) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> level(0, 20);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(300), y(300);
    for (int i = 0; i < 300; ++i) x[i] = level(rng), y[i] = level(rng) + 0.5 * x[i];
    EXPECT_NEAR(krcc(x, y), static_cast<double>(krcc_oracle(x, y)), 1e-12);
  }
}

TEST(Stats, MonotoneTransformInvariance) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(50), y(50), fx(50), gy(50);
    for (int i = 0; i < 50; ++i) {
      x[i] = u(rng);
      y[i] = x[i] + 0.3 * u(rng);
      fx[i] = std::exp(3 * x[i]) + 7;
      gy[i] = -1.0 / (1.0 + y[i]);
    }
    EXPECT_EQ(srcc(fx, gy), srcc(x, y));
    EXPECT_EQ(krcc(fx, gy), krcc(x, y));
  }
}

TEST(Stats, PearsonErrors) {
  const std::vector<double> a{1, 2, 3}, b{1, 2}, flat{2, 2, 2};
  EXPECT_THROW(pearson(a, b), iqa::StatisticError);
  EXPECT_THROW(pearson(a, flat), iqa::StatisticError);
  EXPECT_THROW(srcc(std::vector<double>{1}, std::vector<double>{1}), iqa::StatisticError);
  EXPECT_DOUBLE_EQ(pearson(a, std::vector<double>{3, 2, 1}), -1.0);
}

TEST(Stats, CubicRecoveredExactly) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(20, 45);
  std::vector<double> x(60), y(60);
  for (int i = 0; i < 60; ++i) {
    x[i] = u(rng);
    y[i] = 2 - 0.3 * x[i] + 0.02 * x[i] * x[i] - 1e-4 * x[i] * x[i] * x[i];
  }
  const PolyFit fit = plcc_poly3(x, y);
  EXPECT_NEAR(fit.plcc, 1.0, 1e-12);
  for (int i = 0; i < 60; ++i) EXPECT_NEAR(poly_eval(fit.coeffs, x[i]), y[i], 1e-9);
  EXPECT_NEAR(fit.coeffs[3], -1e-4, 1e-9);
}

TEST(Stats, CubicMatchesLeastSquaresOracle) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  std::normal_distribution<double> noise(0, 0.5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 5 + trial % 60;
    const double scale = trial % 2 ? 1.0 : 40.0;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = scale * u(rng);
      y[i] = 3 + std::tanh(4 * x[i] / scale - 2) + noise(rng);
    }
    const PolyFit fit = plcc_poly3(x, y);
    const auto oracle = cubic_fit_oracle(x, y);
    std::vector<LD> mos(y.begin(), y.end());
    EXPECT_NEAR(fit.plcc, static_cast<double>(pearson_oracle(oracle, mos)), 1e-8);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(fit.fitted[i], static_cast<double>(oracle[i]), 1e-8);
  }
}

TEST(Stats, CubicFitErrors) {
  EXPECT_THROW(plcc_poly3(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 2, 3, 4}), iqa::FitError);
  EXPECT_THROW(plcc_poly3(std::vector<double>(6, 1.0), std::vector<double>{1, 2, 3, 4, 5, 6}), iqa::FitError);
}

TEST(Stats, SaturationFlagsFlatTop) {
  std::vector<double> x, mos;
  for (int i = 0; i < 200; ++i) {
    const double m = i / 199.0;
    mos.push_back(m);
    x.push_back(m < 0.75 ? m : 0.75 + 0.01 * (m - 0.75));  // metric stops responding at the top
  }
  // Score against the identity mapping so the diagnostic sees the raw response.
  const std::array<double, 4> identity{0, 1, 0, 0};
  EXPECT_TRUE(saturation_diagnostic(x, mos, identity).saturated);
  std::vector<double> linear(mos);
  EXPECT_FALSE(saturation_diagnostic(linear, mos, identity).saturated);
}
