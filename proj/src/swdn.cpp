#include "iqa/swdn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>

#include "json.hpp"

#include "iqa/errors.hpp"

namespace iqa {
namespace {

std::string backbone_name(int stage, const char* part) {
  return "backbone." + std::to_string(stage) + "." + part;
}

std::string head_name(int stage, const char* part) {
  return "head." + std::to_string(stage) + "." + part;
}

std::string shape_str(const std::vector<int>& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "]";
}

Tensor normal_tensor(std::vector<int> shape, double stddev, bool non_negative, std::mt19937_64& rng) {
  Tensor t{std::move(shape), {}};
  t.data.resize(t.numel());
  std::normal_distribution<double> dist(0.0, stddev);
  for (float& v : t.data) {
    const double x = dist(rng);
    v = static_cast<float>(non_negative ? std::abs(x) : x);
  }
  return t;
}

Tensor zeros(std::vector<int> shape) {
  Tensor t{std::move(shape), {}};
  t.data.assign(t.numel(), 0.0f);
  return t;
}

FeatureMap image_input(const Image& img) {
  validate(img);
  FeatureMap f(3, img.height, img.width);
  for (int c = 0; c < 3; ++c) {
    auto src = img.plane(img.channels == 3 ? c : 0);
    std::copy(src.begin(), src.end(), f.data.begin() + static_cast<std::ptrdiff_t>(c * src.size()));
  }
  return f;
}

FeatureMap conv_relu(const FeatureMap& in, const Tensor& w, const Tensor& b) {
  const int cout = w.shape[0], k = w.shape[2];
  FeatureMap out(cout, in.height, in.width);
  kernels::conv2d(in.data, in.shape(), w.data, b.data, cout, k, out.data);
  for (float& v : out.data) v = std::max(v, 0.0f);
  return out;
}

int stage_width(const WeightBundle& weights, int stage) {
  return weights.require(backbone_name(stage, "weight")).shape.at(0);
}

}  // namespace

std::size_t Tensor::numel() const {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         [](std::size_t a, int d) { return a * static_cast<std::size_t>(d); });
}

void WeightBundle::set(const std::string& name, Tensor t) {
  if (t.data.size() != t.numel()) throw WeightError("tensor '" + name + "' data length does not match its shape");
  tensors_[name] = std::move(t);
}

const Tensor& WeightBundle::require(const std::string& name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw WeightError("missing tensor '" + name + "'");
  return it->second;
}

const Tensor& WeightBundle::require(const std::string& name, const std::vector<int>& shape) const {
  const Tensor& t = require(name);
  if (t.shape != shape)
    throw WeightError("tensor '" + name + "' has shape " + shape_str(t.shape) + ", expected " + shape_str(shape));
  return t;
}

void WeightBundle::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json manifest = nlohmann::ordered_json::object();
  for (const auto& [name, t] : tensors_) {
    manifest[name] = {{"shape", t.shape}, {"dtype", "f32"}};
    std::vector<std::uint8_t> bytes(t.data.size() * 4);
    for (std::size_t i = 0; i < t.data.size(); ++i) {
      const auto u = std::bit_cast<std::uint32_t>(t.data[i]);
      for (int b = 0; b < 4; ++b) bytes[4 * i + b] = static_cast<std::uint8_t>(u >> (8 * b));
    }
    write_file(dir / (name + ".bin"), bytes);
  }
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << "\n";
}

WeightBundle WeightBundle::load(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw WeightError("cannot open " + (dir / "manifest.json").string());
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw WeightError(std::string("malformed manifest.json: ") + e.what());
  }
  WeightBundle bundle;
  for (const auto& [name, entry] : manifest.items()) {
    if (!entry.contains("shape") || entry.value("dtype", "") != "f32")
      throw WeightError("tensor '" + name + "' needs a shape and dtype \"f32\"");
    Tensor t;
    t.shape = entry["shape"].get<std::vector<int>>();
    const auto bytes = read_file(dir / (name + ".bin"));
    if (bytes.size() != 4 * t.numel())
      throw WeightError("tensor '" + name + "' file holds " + std::to_string(bytes.size()) +
                        " bytes, expected " + std::to_string(4 * t.numel()));
    t.data.resize(t.numel());
    for (std::size_t i = 0; i < t.data.size(); ++i) {
      std::uint32_t u = 0;
      for (int b = 0; b < 4; ++b) u |= static_cast<std::uint32_t>(bytes[4 * i + b]) << (8 * b);
      t.data[i] = std::bit_cast<float>(u);
    }
    bundle.set(name, std::move(t));
  }
  return bundle;
}

WeightBundle random_weights(std::uint64_t seed, std::array<int, kStages> widths) {
  std::mt19937_64 rng(seed);
  WeightBundle w;
  int cin = 3;
  for (int s = 1; s <= kStages; ++s) {
    const int cout = widths[s - 1];
    w.set(backbone_name(s, "weight"), normal_tensor({cout, cin, 3, 3}, std::sqrt(2.0 / (cin * 9)), false, rng));
    w.set(backbone_name(s, "bias"), zeros({cout}));
    w.set(head_name(s, "conv1.weight"),
          normal_tensor({kHeadHidden, cout, 1, 1}, std::sqrt(2.0 / cout), true, rng));
    w.set(head_name(s, "conv1.bias"), zeros({kHeadHidden}));
    w.set(head_name(s, "conv2.weight"),
          normal_tensor({1, kHeadHidden, 1, 1}, std::sqrt(2.0 / kHeadHidden), true, rng));
    w.set(head_name(s, "conv2.bias"), zeros({1}));
    cin = cout;
  }
  const int hid = kPreferenceHidden;
  w.set("pref.fc1.weight", normal_tensor({hid, 2}, 1.0, false, rng));
  w.set("pref.fc1.bias", zeros({hid}));
  w.set("pref.fc2.weight", normal_tensor({hid, hid}, std::sqrt(2.0 / hid), false, rng));
  w.set("pref.fc2.bias", zeros({hid}));
  w.set("pref.fc3.weight", normal_tensor({1, hid}, std::sqrt(1.0 / hid), false, rng));
  w.set("pref.fc3.bias", zeros({1}));
  return w;
}

void validate_swdn_weights(const WeightBundle& weights) {
  int cin = 3;
  for (int s = 1; s <= kStages; ++s) {
    const Tensor& conv = weights.require(backbone_name(s, "weight"));
    if (conv.shape.size() != 4)
      throw WeightError("tensor '" + backbone_name(s, "weight") + "' must be 4-D [out,in,k,k]");
    const int cout = conv.shape[0], k = conv.shape[2];
    weights.require(backbone_name(s, "weight"), {cout, cin, k, k});
    if (k % 2 == 0) throw WeightError("tensor '" + backbone_name(s, "weight") + "' needs an odd kernel size");
    weights.require(backbone_name(s, "bias"), {cout});
    const Tensor& h1 = weights.require(head_name(s, "conv1.weight"));
    if (h1.shape.empty()) throw WeightError("tensor '" + head_name(s, "conv1.weight") + "' has no shape");
    const int hidden = h1.shape[0];
    weights.require(head_name(s, "conv1.weight"), {hidden, cout, 1, 1});
    weights.require(head_name(s, "conv1.bias"), {hidden});
    weights.require(head_name(s, "conv2.weight"), {1, hidden, 1, 1});
    weights.require(head_name(s, "conv2.bias"), {1});
    cin = cout;
  }
}

FeatureStack backbone_forward(const Image& img, const WeightBundle& weights, PoolKind pool) {
  validate_swdn_weights(weights);
  FeatureStack stack;
  stack.reserve(kStages);
  FeatureMap x = image_input(img);
  for (int s = 1; s <= kStages; ++s) {
    if (s > 1) x = pool == PoolKind::l2 ? l2_pool(x, kDefaultPoolKernel, 2) : max_pool(x, 3, 2);
    x = conv_relu(x, weights.require(backbone_name(s, "weight")), weights.require(backbone_name(s, "bias")));
    stack.push_back(x);
  }
  return stack;
}

double stage_head(const FeatureMap& diff, const WeightBundle& weights, int stage) {
  const int c = diff.channels;
  if (stage_width(weights, stage) != c)
    throw WeightError("tensor '" + backbone_name(stage, "weight") + "' width does not match the feature map");
  const Tensor& w1 = weights.require(head_name(stage, "conv1.weight"));
  const int hidden = w1.shape[0];
  const Tensor& b1 = weights.require(head_name(stage, "conv1.bias"), {hidden});
  const Tensor& w2 = weights.require(head_name(stage, "conv2.weight"), {1, hidden, 1, 1});
  const Tensor& b2 = weights.require(head_name(stage, "conv2.bias"), {1});

  const std::size_t plane = static_cast<std::size_t>(diff.height) * diff.width;
  double total = 0.0;
  std::vector<double> sq(c);
  for (std::size_t p = 0; p < plane; ++p) {
    for (int ch = 0; ch < c; ++ch) {
      const double d = diff.data[ch * plane + p];
      sq[ch] = d * d;
    }
    double out = b2.data[0];
    for (int u = 0; u < hidden; ++u) {
      double act = b1.data[u];
      for (int ch = 0; ch < c; ++ch) act += static_cast<double>(w1.data[static_cast<std::size_t>(u) * c + ch]) * sq[ch];
      out += w2.data[u] * std::max(act, 0.0);
    }
    total += out;
  }
  return total / static_cast<double>(plane);
}

double swdn_score(const Image& ref, const Image& dist, const WeightBundle& weights, int radius) {
  if (!ref.same_shape(dist)) throw ArgumentError("reference and distorted images differ in shape");
  const FeatureStack fr = backbone_forward(ref, weights);
  const FeatureStack fd = backbone_forward(dist, weights);
  double score = 0.0;
  for (int s = 0; s < kStages; ++s) score += stage_head(swd(fr[s], fd[s], radius), weights, s + 1);
  return score;
}

PreferenceHead PreferenceHead::from_weights(const WeightBundle& weights) {
  const int h = kPreferenceHidden;
  PreferenceHead head;
  head.w1 = weights.require("pref.fc1.weight", {h, 2}).data;
  head.b1 = weights.require("pref.fc1.bias", {h}).data;
  head.w2 = weights.require("pref.fc2.weight", {h, h}).data;
  head.b2 = weights.require("pref.fc2.bias", {h}).data;
  head.w3 = weights.require("pref.fc3.weight", {1, h}).data;
  head.b3 = weights.require("pref.fc3.bias", {1}).data;
  return head;
}

PreferenceHead PreferenceHead::constant(double p) {
  const int h = kPreferenceHidden;
  PreferenceHead head;
  head.w1.assign(h * 2, 0.0f);
  head.b1.assign(h, 0.0f);
  head.w2.assign(h * h, 0.0f);
  head.b2.assign(h, 0.0f);
  head.w3.assign(h, 0.0f);
  head.b3.assign(1, static_cast<float>(std::log(p / (1.0 - p))));
  return head;
}

double PreferenceHead::predict(double score_a, double score_b) const {
  const int h = kPreferenceHidden;
  std::array<double, kPreferenceHidden> h1{}, h2{};
  for (int u = 0; u < h; ++u)
    h1[u] = std::max(0.0, b1[u] + static_cast<double>(w1[2 * u]) * score_a + w1[2 * u + 1] * score_b);
  for (int u = 0; u < h; ++u) {
    double acc = b2[u];
    for (int v = 0; v < h; ++v) acc += static_cast<double>(w2[static_cast<std::size_t>(u) * h + v]) * h1[v];
    h2[u] = std::max(0.0, acc);
  }
  double logit = b3[0];
  for (int v = 0; v < h; ++v) logit += static_cast<double>(w3[v]) * h2[v];
  return 1.0 / (1.0 + std::exp(-logit));
}

double preference_loss(double score_a, double score_b, double h, const PreferenceHead& head) {
  if (!(h >= 0.0 && h <= 1.0)) throw ArgumentError("preference probability h must lie in [0,1]");
  const double g = std::clamp(head.predict(score_a, score_b), kProbabilityClamp, 1.0 - kProbabilityClamp);
  return -h * std::log(g) - (1.0 - h) * std::log(1.0 - g);
}

}  // namespace iqa
