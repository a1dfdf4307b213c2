#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "iqa/feature_sim.hpp"
#include "iqa/image.hpp"

namespace iqa {

struct Tensor {
  std::vector<int> shape;
  std::vector<float> data;

  std::size_t numel() const;
};

/// Named parameter tensors. On disk: a directory holding manifest.json
/// (name -> {"shape": [...], "dtype": "f32"}) and one little-endian float32
/// file `<name>.bin` per tensor.
class WeightBundle {
public:
  void set(const std::string& name, Tensor t);
  bool contains(const std::string& name) const { return tensors_.count(name) != 0; }
  /// Throws WeightError naming the tensor if it is missing or its shape
  /// differs from `shape`.
  const Tensor& require(const std::string& name, const std::vector<int>& shape) const;
  const Tensor& require(const std::string& name) const;
  const std::map<std::string, Tensor>& tensors() const { return tensors_; }

  void save(const std::filesystem::path& dir) const;
  static WeightBundle load(const std::filesystem::path& dir);

private:
  std::map<std::string, Tensor> tensors_;
};

inline constexpr int kStages = 5;
inline constexpr int kHeadHidden = 16;
inline constexpr int kPreferenceHidden = 32;
inline constexpr std::uint64_t kDefaultWeightSeed = 20200717;
inline constexpr std::array<int, kStages> kDefaultStageWidths = {8, 16, 24, 32, 32};

/// Seeded random bundle for the default architecture: He-normal 3x3
/// backbone convolutions, non-negative per-stage regression heads, zero
/// biases, and a random preference head.
WeightBundle random_weights(std::uint64_t seed = kDefaultWeightSeed,
                            std::array<int, kStages> widths = kDefaultStageWidths);

/// Checks the tensor layout expected by backbone_forward / swdn_score.
void validate_swdn_weights(const WeightBundle& weights);

using FeatureStack = std::vector<FeatureMap>;

enum class PoolKind { l2, max };

/// Stage 1 is conv3x3 + ReLU at full resolution; stages 2..5 first
/// downsample by 2 (l2 pooling by default), then conv3x3 + ReLU.
/// Grayscale inputs are replicated to three channels.
FeatureStack backbone_forward(const Image& img, const WeightBundle& weights, PoolKind pool = PoolKind::l2);

/// Per-stage regression head: 1x1 conv + ReLU + 1x1 conv on the squared
/// difference map, then a spatial mean.
double stage_head(const FeatureMap& diff, const WeightBundle& weights, int stage);

/// Sum over stages of head_i(swd(f_ref^i, f_dist^i, radius)).
double swdn_score(const Image& ref, const Image& dist, const WeightBundle& weights,
                  int radius = kDefaultSwdRadius);

/// G: (S_A, S_B) -> probability that A is preferred. Two 32-unit ReLU layers
/// then a logistic unit.
struct PreferenceHead {
  std::vector<float> w1, b1;  // [32][2], [32]
  std::vector<float> w2, b2;  // [32][32], [32]
  std::vector<float> w3, b3;  // [1][32], [1]

  static PreferenceHead from_weights(const WeightBundle& weights);
  /// All weights zero, output bias set so that the prediction equals `p`.
  static PreferenceHead constant(double p);

  double predict(double score_a, double score_b) const;
};

inline constexpr double kProbabilityClamp = 1e-7;

/// Ranking cross entropy -h log G - (1-h) log(1-G), with G clamped to
/// [1e-7, 1 - 1e-7]. Throws ArgumentError for h outside [0,1].
double preference_loss(double score_a, double score_b, double h, const PreferenceHead& head);

}  // namespace iqa
