// Serial reference kernels against their OpenMP versions.
// Run with --benchmark_filter=<kernel> to compare one pair.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "iqa/kernels.hpp"

namespace k = iqa::kernels;

namespace {

std::vector<float> random_floats(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::vector<float> v(n);
  for (float& x : v) x = u(rng);
  return v;
}

std::vector<double> gaussian_taps(int n, double sigma) {
  std::vector<double> t(n);
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += t[i] = std::exp(-0.5 * (i - n / 2) * (i - n / 2) / (sigma * sigma));
  for (double& x : t) x /= sum;
  return t;
}

k::Shape shape_of(const benchmark::State& s, int channels) {
  return {channels, static_cast<int>(s.range(0)), static_cast<int>(s.range(0))};
}

template <auto Fn>
void filter_2d(benchmark::State& state) {
  const k::Shape shape = shape_of(state, 3);
  const auto in = random_floats(shape.size(), 1);
  const std::vector<double> kernel(11 * 11, 1.0 / 121);
  std::vector<float> out(shape.size());
  for (auto _ : state) {
    Fn(in, shape, kernel, 11, 11, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * shape.size());
}

template <auto Fn>
void filter_separable(benchmark::State& state) {
  const k::Shape shape = shape_of(state, 3);
  const auto in = random_floats(shape.size(), 2);
  const auto taps = gaussian_taps(11, 1.5);
  std::vector<float> out(shape.size());
  for (auto _ : state) {
    Fn(in, shape, taps, taps, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * shape.size());
}

template <auto Fn>
void l2_pool(benchmark::State& state) {
  const k::Shape shape = shape_of(state, 64);
  const auto in = random_floats(shape.size(), 3);
  const auto taps = gaussian_taps(5, 1.0);
  std::vector<float> out(static_cast<std::size_t>(64) * k::ceil_div(shape.height, 2) * k::ceil_div(shape.width, 2));
  for (auto _ : state) {
    Fn(in, shape, taps, 2, 1e-12, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * shape.size());
}

template <auto Fn>
void swd(benchmark::State& state) {
  const k::Shape shape = shape_of(state, 64);
  const auto a = random_floats(shape.size(), 4), b = random_floats(shape.size(), 5);
  std::vector<float> out(shape.size());
  for (auto _ : state) {
    Fn(a, b, shape, 3, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * shape.size());
}

template <auto Fn>
void conv2d(benchmark::State& state) {
  const k::Shape shape = shape_of(state, 32);
  const int cout = 32, ks = 3;
  const auto in = random_floats(shape.size(), 6);
  const auto weight = random_floats(static_cast<std::size_t>(cout) * 32 * ks * ks, 7);
  const auto bias = random_floats(cout, 8);
  std::vector<float> out(static_cast<std::size_t>(cout) * shape.plane());
  for (auto _ : state) {
    Fn(in, shape, weight, bias, cout, ks, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * out.size());
}

}  // namespace

BENCHMARK(filter_2d<k::serial::filter_2d>)->Name("filter_2d/serial")->Arg(64)->Arg(256);
BENCHMARK(filter_2d<k::filter_2d>)->Name("filter_2d/parallel")->Arg(64)->Arg(256)->UseRealTime();
BENCHMARK(filter_separable<k::serial::filter_separable>)->Name("filter_separable/serial")->Arg(256)->Arg(512);
BENCHMARK(filter_separable<k::filter_separable>)->Name("filter_separable/parallel")->Arg(256)->Arg(512)->UseRealTime();
BENCHMARK(l2_pool<k::serial::l2_pool>)->Name("l2_pool/serial")->Arg(64)->Arg(128);
BENCHMARK(l2_pool<k::l2_pool>)->Name("l2_pool/parallel")->Arg(64)->Arg(128)->UseRealTime();
BENCHMARK(swd<k::serial::swd>)->Name("swd/serial")->Arg(32)->Arg(64);
BENCHMARK(swd<k::swd>)->Name("swd/parallel")->Arg(32)->Arg(64)->UseRealTime();
BENCHMARK(conv2d<k::serial::conv2d>)->Name("conv2d/serial")->Arg(32)->Arg(64);
BENCHMARK(conv2d<k::conv2d>)->Name("conv2d/parallel")->Arg(32)->Arg(64)->UseRealTime();

BENCHMARK_MAIN();
