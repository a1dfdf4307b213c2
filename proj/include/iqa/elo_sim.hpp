#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iqa/elo.hpp"

namespace iqa::elo {

struct PopulationItem {
  std::string id;
  double truth = 0.0;
};

/// Synthetic items with known ground-truth scores. Simulated raters prefer a
/// with probability 1 / (1 + 10^((g_b - g_a) / truth_m)).
struct Population {
  std::vector<PopulationItem> items;
  double truth_m = 400.0;
};

struct Checkpoint {
  std::uint64_t judgements = 0;
  double srcc = 0.0;
};

struct ConvergenceCurve {
  std::vector<Checkpoint> points;

  /// Judgement count of the first checkpoint with srcc >= threshold.
  std::optional<std::uint64_t> first_reaching(double threshold) const;
  double final_srcc() const { return points.empty() ? 0.0 : points.back().srcc; }
};

inline constexpr double kDefaultSpread = 400.0;

/// n items "p0".."p{n-1}" (or `prefix` + index) with truths drawn from
/// N(1400, spread^2); exact ties are nudged apart.
Population make_population(int n, std::uint64_t seed, double spread = kDefaultSpread, double truth_m = 400.0,
                           const std::string& prefix = "p");

/// true when the first item wins.
bool simulate_judgement(double truth_a, double truth_b, double truth_m, Rng& rng);

struct SimulationOptions {
  EloConfig config;
  Strategy strategy = Strategy::similar;
  std::uint64_t total_judgements = 200000;
  std::uint64_t checkpoint_every = 1000;
  std::uint64_t seed = 0;
  int window = kSimilarWindow;
};

/// Rates `pop` (one global group) with simulated raters and records
/// SRCC(current Elo scores, truth) every `checkpoint_every` judgements and at
/// the end.
ConvergenceCurve run_simulation(const Population& pop, const SimulationOptions& opts);

struct ExpandabilityResult {
  ConvergenceCurve curve;               // SRCC over all items present at each checkpoint
  ConvergenceCurve original_curve;      // SRCC restricted to the original items
  std::vector<double> pre_add_scores;   // original items, end of phase 1
  std::vector<double> post_add_scores;  // original items, end of phase 2
  double original_srcc_before = 0.0;
  double original_srcc_after = 0.0;
  double combined_srcc_after = 0.0;
};

/// Phase 1 rates `pop` for `phase1` judgements; phase 2 adds `added` at the
/// initial score and continues for `phase2` more. `opts.total_judgements` is
/// ignored. Colliding ids throw ArgumentError.
ExpandabilityResult run_expandability(const Population& pop, const Population& added, const SimulationOptions& opts,
                                      std::uint64_t phase1, std::uint64_t phase2);

/// CSV with header `judgements,srcc`.
std::string curve_csv(const ConvergenceCurve& curve);

}  // namespace iqa::elo
