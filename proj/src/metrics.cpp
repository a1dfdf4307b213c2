#include "iqa/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "iqa/errors.hpp"
#include "iqa/kernels.hpp"

namespace iqa {
namespace {

struct PlaneRef {
  std::span<const double> v;
  int h;
  int w;
};

const std::array<double, kSsimWindow>& ssim_taps() {
  static const auto taps = [] {
    std::array<double, kSsimWindow> t{};
    double sum = 0.0;
    for (int i = 0; i < kSsimWindow; ++i) {
      const double d = i - kSsimWindow / 2;
      t[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
      sum += t[i];
    }
    for (double& x : t) x /= sum;
    return t;
  }();
  return taps;
}

void check_shapes(const ImageD& ref, const ImageD& dist) {
  if (!ref.same_shape(dist)) throw ArgumentError("reference and distorted images differ in shape");
  if (ref.channels != 1 && ref.channels != 3) throw ArgumentError("metrics need 1 or 3 channels");
}

// Channels the metric is evaluated on: luminance or each RGB channel.
struct Working {
  ImageD ref;
  ImageD dist;
  bool luminance = false;
};

Working working_planes(const ImageD& ref, const ImageD& dist, MetricOptions opts) {
  check_shapes(ref, dist);
  if (ref.channels == 3 && !opts.per_channel) return {to_luminance(ref), to_luminance(dist), true};
  return {ref, dist, false};
}

PlaneRef plane(const ImageD& img, int c) { return {img.plane(c), img.height, img.width}; }

// Pulls a gradient computed on the working planes back to the input layout.
GradientField lift_gradient(const ImageD& grad_work, const ImageD& dist, bool luminance) {
  if (!luminance) {
    GradientField g = grad_work;
    const double inv = 1.0 / grad_work.channels;
    for (double& v : g.data) v *= inv;
    return g;
  }
  GradientField g(dist.width, dist.height, dist.channels);
  const std::array<double, 3> weights{kLumaR, kLumaG, kLumaB};
  for (int c = 0; c < 3; ++c) {
    auto dst = g.plane(c);
    auto src = grad_work.plane(0);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = weights[c] * src[i];
  }
  return g;
}

double plane_mse(PlaneRef x, PlaneRef y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.v.size(); ++i) {
    const double d = y.v[i] - x.v[i];
    acc += d * d;
  }
  return acc / static_cast<double>(x.v.size());
}

double plane_psnr(PlaneRef x, PlaneRef y) {
  const double mse = plane_mse(x, y);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

struct SsimStats {
  double ssim = 0.0;  // mean of the full SSIM map
  double cs = 0.0;    // mean of the contrast-structure map
};

struct SsimMaps {
  int oh = 0, ow = 0;
  std::vector<double> mx, my, exx, eyy, exy;
};

SsimMaps ssim_maps(PlaneRef x, PlaneRef y) {
  const auto& taps = ssim_taps();
  SsimMaps m;
  m.oh = x.h - kSsimWindow + 1;
  m.ow = x.w - kSsimWindow + 1;
  const std::size_t n = static_cast<std::size_t>(m.oh) * m.ow;
  const std::size_t full = x.v.size();
  std::vector<double> xx(full), yy(full), xy(full);
  for (std::size_t i = 0; i < full; ++i) {
    xx[i] = x.v[i] * x.v[i];
    yy[i] = y.v[i] * y.v[i];
    xy[i] = x.v[i] * y.v[i];
  }
  for (auto* buf : {&m.mx, &m.my, &m.exx, &m.eyy, &m.exy}) buf->resize(n);
  kernels::filter_valid(x.v, x.h, x.w, taps, m.mx);
  kernels::filter_valid(y.v, x.h, x.w, taps, m.my);
  kernels::filter_valid(xx, x.h, x.w, taps, m.exx);
  kernels::filter_valid(yy, x.h, x.w, taps, m.eyy);
  kernels::filter_valid(xy, x.h, x.w, taps, m.exy);
  return m;
}

SsimStats plane_ssim(PlaneRef x, PlaneRef y) {
  const SsimMaps m = ssim_maps(x, y);
  const std::size_t n = m.mx.size();
  double ssim_sum = 0.0, cs_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mx = m.mx[i], my = m.my[i];
    const double sxx = m.exx[i] - mx * mx, syy = m.eyy[i] - my * my, sxy = m.exy[i] - mx * my;
    const double a1 = 2 * mx * my + kSsimC1, b1 = mx * mx + my * my + kSsimC1;
    const double a2 = 2 * sxy + kSsimC2, b2 = sxx + syy + kSsimC2;
    ssim_sum += (a1 * a2) / (b1 * b2);
    cs_sum += a2 / b2;
  }
  return {ssim_sum / n, cs_sum / n};
}

void plane_ssim_gradient(PlaneRef x, PlaneRef y, std::span<double> grad) {
  const auto& taps = ssim_taps();
  const SsimMaps m = ssim_maps(x, y);
  const std::size_t n = m.mx.size();
  std::vector<double> alpha(n), beta(n), gamma(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mx = m.mx[i], my = m.my[i];
    const double sxx = m.exx[i] - mx * mx, syy = m.eyy[i] - my * my, sxy = m.exy[i] - mx * my;
    const double a1 = 2 * mx * my + kSsimC1, b1 = mx * mx + my * my + kSsimC1;
    const double a2 = 2 * sxy + kSsimC2, b2 = sxx + syy + kSsimC2;
    const double s = (a1 * a2) / (b1 * b2);
    alpha[i] = s * (2 * mx / a1 - 2 * mx / a2 - 2 * my / b1 + 2 * my / b2);
    beta[i] = -s / b2;
    gamma[i] = 2 * s / a2;
  }
  const std::size_t full = x.v.size();
  std::vector<double> ga(full), gb(full), gc(full);
  kernels::filter_valid_adjoint(alpha, x.h, x.w, taps, ga);
  kernels::filter_valid_adjoint(beta, x.h, x.w, taps, gb);
  kernels::filter_valid_adjoint(gamma, x.h, x.w, taps, gc);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < full; ++i) grad[i] = inv * (ga[i] + 2 * y.v[i] * gb[i] + x.v[i] * gc[i]);
}

void require_min_dim(const ImageD& img, int min_dim, const char* what) {
  if (img.width < min_dim || img.height < min_dim)
    throw ArgumentError(std::string(what) + " needs images of at least " + std::to_string(min_dim) +
                        "x" + std::to_string(min_dim));
}

std::vector<double> downsample2(std::span<const double> v, int h, int w) {
  const int oh = h / 2, ow = w / 2;
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      const std::size_t a = static_cast<std::size_t>(2 * y) * w + 2 * x;
      out[static_cast<std::size_t>(y) * ow + x] = 0.25 * (v[a] + v[a + 1] + v[a + w] + v[a + w + 1]);
    }
  return out;
}

double plane_ms_ssim(PlaneRef x, PlaneRef y) {
  std::vector<double> xs(x.v.begin(), x.v.end()), ys(y.v.begin(), y.v.end());
  int h = x.h, w = x.w;
  double value = 1.0;
  for (int s = 0; s < kMsSsimScales; ++s) {
    const SsimStats st = plane_ssim({xs, h, w}, {ys, h, w});
    const double term = s + 1 == kMsSsimScales ? st.ssim : st.cs;
    value *= std::pow(std::max(term, 0.0), kMsSsimWeights[s]);
    if (s + 1 < kMsSsimScales) {
      xs = downsample2(xs, h, w);
      ys = downsample2(ys, h, w);
      h /= 2;
      w /= 2;
    }
  }
  return value;
}

template <typename Fn>
double mean_over_planes(const Working& wk, Fn&& fn) {
  double acc = 0.0;
  for (int c = 0; c < wk.ref.channels; ++c) acc += fn(plane(wk.ref, c), plane(wk.dist, c));
  return acc / wk.ref.channels;
}

}  // namespace

Metric parse_metric(std::string_view name) {
  if (name == "psnr") return Metric::psnr;
  if (name == "ssim") return Metric::ssim;
  if (name == "ms_ssim" || name == "ms-ssim" || name == "msssim") return Metric::ms_ssim;
  throw ArgumentError("unknown metric '" + std::string(name) + "'");
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::psnr: return "psnr";
    case Metric::ssim: return "ssim";
    case Metric::ms_ssim: return "ms_ssim";
  }
  return "?";
}

double psnr_value(const ImageD& ref, const ImageD& dist, MetricOptions opts) {
  return mean_over_planes(working_planes(ref, dist, opts), plane_psnr);
}

double ssim_value(const ImageD& ref, const ImageD& dist, MetricOptions opts) {
  check_shapes(ref, dist);
  require_min_dim(ref, kSsimWindow, "ssim");
  return mean_over_planes(working_planes(ref, dist, opts),
                          [](PlaneRef x, PlaneRef y) { return plane_ssim(x, y).ssim; });
}

double ms_ssim_value(const ImageD& ref, const ImageD& dist, MetricOptions opts) {
  check_shapes(ref, dist);
  require_min_dim(ref, kSsimWindow << (kMsSsimScales - 1), "ms_ssim");
  return mean_over_planes(working_planes(ref, dist, opts), plane_ms_ssim);
}

double metric_value(Metric m, const ImageD& ref, const ImageD& dist, MetricOptions opts) {
  switch (m) {
    case Metric::psnr: return psnr_value(ref, dist, opts);
    case Metric::ssim: return ssim_value(ref, dist, opts);
    case Metric::ms_ssim: return ms_ssim_value(ref, dist, opts);
  }
  throw ArgumentError("unknown metric");
}

MetricScore psnr(const Image& ref, const Image& dist, MetricOptions opts) {
  return {psnr_value(to_double(ref), to_double(dist), opts), true};
}

MetricScore ssim(const Image& ref, const Image& dist, MetricOptions opts) {
  return {ssim_value(to_double(ref), to_double(dist), opts), true};
}

MetricScore ms_ssim(const Image& ref, const Image& dist, MetricOptions opts) {
  return {ms_ssim_value(to_double(ref), to_double(dist), opts), true};
}

MetricScore evaluate(Metric m, const Image& ref, const Image& dist, MetricOptions opts) {
  return {metric_value(m, to_double(ref), to_double(dist), opts), true};
}

GradientField metric_gradient(Metric m, const ImageD& ref, const ImageD& dist, MetricOptions opts) {
  const Working wk = working_planes(ref, dist, opts);
  ImageD grad(wk.ref.width, wk.ref.height, wk.ref.channels);
  switch (m) {
    case Metric::psnr: {
      for (int c = 0; c < wk.ref.channels; ++c) {
        const PlaneRef x = plane(wk.ref, c), y = plane(wk.dist, c);
        const double mse = plane_mse(x, y);
        if (mse == 0.0) throw NumericError("psnr gradient is singular for identical inputs");
        const double scale = -10.0 / std::numbers::ln10 / mse * 2.0 / static_cast<double>(x.v.size());
        auto g = grad.plane(c);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = scale * (y.v[i] - x.v[i]);
      }
      break;
    }
    case Metric::ssim:
      require_min_dim(ref, kSsimWindow, "ssim");
      for (int c = 0; c < wk.ref.channels; ++c) plane_ssim_gradient(plane(wk.ref, c), plane(wk.dist, c), grad.plane(c));
      break;
    case Metric::ms_ssim:
      throw ArgumentError("ms_ssim has no gradient implementation");
  }
  for (double v : grad.data)
    if (!std::isfinite(v)) throw NumericError("non-finite metric gradient");
  return lift_gradient(grad, dist, wk.luminance);
}

GradientField metric_gradient(Metric m, const Image& ref, const Image& dist, MetricOptions opts) {
  return metric_gradient(m, to_double(ref), to_double(dist), opts);
}

}  // namespace iqa
