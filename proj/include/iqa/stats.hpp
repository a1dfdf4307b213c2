#pragma once

#include <array>
#include <span>
#include <vector>

namespace iqa::stats {

/// 1-based ranks with ties sharing the mean of their positions.
std::vector<double> fractional_ranks(std::span<const double> xs);

/// Plain Pearson correlation. Throws StatisticError on length mismatch,
/// n < 2 or zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Spearman: Pearson correlation of fractional ranks.
double srcc(std::span<const double> xs, std::span<const double> ys);

/// Kendall tau-b (tie corrected), O(n log n).
double krcc(std::span<const double> xs, std::span<const double> ys);

struct PolyFit {
  double plcc = 0.0;
  /// mos ~ c0 + c1 x + c2 x^2 + c3 x^3 in the objective's own units.
  std::array<double, 4> coeffs{};
  std::vector<double> fitted;
};

double poly_eval(const std::array<double, 4>& c, double x);

/// Least-squares cubic of `mos` on `objective` (column-pivoted Householder QR
/// on a standardized axis), then Pearson(fitted, mos). Needs n >= 5 and a
/// non-constant objective; otherwise throws FitError.
PolyFit plcc_poly3(std::span<const double> objective, std::span<const double> mos);

struct SaturationOptions {
  double ratio = 0.10;  // flag when top-quartile slope < ratio * median slope
};

struct SaturationReport {
  bool saturated = false;
  /// Slope of fitted value against MOS inside each MOS quartile, lowest first.
  std::array<double, 4> quartile_slopes{};
  double top_slope = 0.0;
  double median_slope = 0.0;
};

/// Flags fits whose curve flattens over the highest-MOS quartile: the fitted
/// value barely moves while MOS keeps rising, so PLCC is carried by the low
/// end and overstates accuracy.
SaturationReport saturation_diagnostic(std::span<const double> objective, std::span<const double> mos,
                                       const std::array<double, 4>& coeffs, SaturationOptions opts = {});

}  // namespace iqa::stats
