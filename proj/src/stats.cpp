#include "iqa/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "iqa/errors.hpp"

namespace iqa::stats {
namespace {

void check_pair(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw StatisticError("paired samples differ in length");
  if (xs.size() < 2) throw StatisticError("need at least two paired samples");
}

// Counts inversions while merge-sorting v in place.
std::uint64_t count_swaps(std::vector<double>& v, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = count_swaps(v, buf, lo, mid) + count_swaps(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
  return swaps;
}

// Sum over runs of equal values of run*(run-1)/2, for a sorted sequence.
template <typename Eq>
std::uint64_t tied_pairs(std::size_t n, Eq&& equal) {
  std::uint64_t pairs = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (equal(i - 1, i)) {
      ++run;
    } else {
      pairs += run * (run - 1) / 2;
      run = 1;
    }
  }
  return pairs + run * (run - 1) / 2;
}

double ols_slope(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

std::vector<double> fractional_ranks(std::span<const double> xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && xs[order[j]] == xs[order[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys);
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) throw StatisticError("correlation undefined for a constant sample");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double srcc(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys);
  const auto rx = fractional_ranks(xs);
  const auto ry = fractional_ranks(ys);
  return pearson(rx, ry);
}

double krcc(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys);
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return xs[a] != xs[b] ? xs[a] < xs[b] : ys[a] < ys[b];
  });
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t ties_x = tied_pairs(n, [&](std::size_t i, std::size_t j) { return xs[order[i]] == xs[order[j]]; });
  const std::uint64_t ties_xy = tied_pairs(n, [&](std::size_t i, std::size_t j) {
    return xs[order[i]] == xs[order[j]] && ys[order[i]] == ys[order[j]];
  });
  std::vector<double> ys_sorted(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) ys_sorted[i] = ys[order[i]];
  const std::uint64_t swaps = count_swaps(ys_sorted, buf, 0, n);
  const std::uint64_t ties_y = tied_pairs(n, [&](std::size_t i, std::size_t j) { return ys_sorted[i] == ys_sorted[j]; });

  const double denom = std::sqrt(static_cast<double>(total - ties_x) * static_cast<double>(total - ties_y));
  if (denom == 0.0) throw StatisticError("kendall tau undefined for a constant sample");
  const double numer = static_cast<double>(total) - static_cast<double>(ties_x) - static_cast<double>(ties_y) +
                       static_cast<double>(ties_xy) - 2.0 * static_cast<double>(swaps);
  return std::clamp(numer / denom, -1.0, 1.0);
}

double poly_eval(const std::array<double, 4>& c, double x) { return c[0] + x * (c[1] + x * (c[2] + x * c[3])); }

PolyFit plcc_poly3(std::span<const double> objective, std::span<const double> mos) {
  if (objective.size() != mos.size()) throw FitError("objective and mos differ in length");
  const std::size_t n = objective.size();
  if (n < 5) throw FitError("cubic fit needs at least 5 samples");
  const double mean = std::accumulate(objective.begin(), objective.end(), 0.0) / static_cast<double>(n);
  double var = 0.0;
  for (double x : objective) var += (x - mean) * (x - mean);
  const double scale = std::sqrt(var / static_cast<double>(n));
  if (!(scale > 0.0) || !std::isfinite(scale)) throw FitError("objective scores are constant");

  Eigen::MatrixXd design(n, 4);
  Eigen::VectorXd target(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = (objective[i] - mean) / scale;
    design(i, 0) = 1.0;
    design(i, 1) = z;
    design(i, 2) = z * z;
    design(i, 3) = z * z * z;
    target(i) = mos[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 4) throw FitError("cubic design is rank deficient (too few distinct objective values)");
  const Eigen::VectorXd b = qr.solve(target);

  PolyFit fit;
  fit.fitted.resize(n);
  for (std::size_t i = 0; i < n; ++i) fit.fitted[i] = (design.row(i) * b)(0);

  // Re-express b (in z = (x - mean) / scale) in powers of x.
  static constexpr double kBinom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  for (int k = 0; k < 4; ++k) {
    const double bk = b(k) / std::pow(scale, k);
    for (int j = 0; j <= k; ++j) fit.coeffs[j] += bk * kBinom[k][j] * std::pow(-mean, k - j);
  }
  for (double c : fit.coeffs)
    if (!std::isfinite(c)) throw FitError("non-finite cubic coefficients");
  fit.plcc = pearson(fit.fitted, mos);
  return fit;
}

SaturationReport saturation_diagnostic(std::span<const double> objective, std::span<const double> mos,
                                       const std::array<double, 4>& coeffs, SaturationOptions opts) {
  SaturationReport rep;
  const std::size_t n = objective.size();
  if (n < 4 || mos.size() != n) return rep;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mos[a] < mos[b]; });
  for (int q = 0; q < 4; ++q) {
    const std::size_t lo = q * n / 4, hi = (q + 1) * n / 4;
    std::vector<double> m, f;
    for (std::size_t i = lo; i < hi; ++i) {
      m.push_back(mos[order[i]]);
      f.push_back(poly_eval(coeffs, objective[order[i]]));
    }
    rep.quartile_slopes[q] = ols_slope(m, f);
  }
  auto sorted = rep.quartile_slopes;
  std::sort(sorted.begin(), sorted.end());
  rep.median_slope = 0.5 * (sorted[1] + sorted[2]);
  rep.top_slope = rep.quartile_slopes[3];
  rep.saturated = rep.median_slope <= 0.0 || rep.top_slope < opts.ratio * rep.median_slope;
  return rep;
}

}  // namespace iqa::stats
