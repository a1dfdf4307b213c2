#include "iqa/elo_sim.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "iqa/errors.hpp"
#include "iqa/stats.hpp"

namespace iqa::elo {
namespace {

constexpr const char* kSimGroup = "sim";

double srcc_over(const EloState& state, const std::vector<double>& truth, std::size_t count) {
  std::vector<double> scores(count);
  for (std::size_t i = 0; i < count; ++i) scores[i] = state.items()[i].score;
  return stats::srcc(scores, std::span<const double>(truth.data(), count));
}

}  // namespace

std::optional<std::uint64_t> ConvergenceCurve::first_reaching(double threshold) const {
  for (const Checkpoint& c : points)
    if (c.srcc >= threshold) return c.judgements;
  return std::nullopt;
}

Population make_population(int n, std::uint64_t seed, double spread, double truth_m, const std::string& prefix) {
  if (n < 2) throw ArgumentError("a population needs at least two items");
  if (!(truth_m > 0.0)) throw ArgumentError("truth_m must be positive");
  Rng rng(seed);
  std::normal_distribution<double> dist(1400.0, spread);
  Population pop;
  pop.truth_m = truth_m;
  std::set<double> seen;
  for (int i = 0; i < n; ++i) {
    double g = dist(rng);
    while (!seen.insert(g).second) g = std::nextafter(g, HUGE_VAL);
    pop.items.push_back({prefix + std::to_string(i), g});
  }
  return pop;
}

bool simulate_judgement(double truth_a, double truth_b, double truth_m, Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < expected_probability(truth_a, truth_b, truth_m);
}

ConvergenceCurve run_simulation(const Population& pop, const SimulationOptions& opts) {
  return run_expandability(pop, Population{{}, pop.truth_m}, opts, opts.total_judgements, 0).curve;
}

ExpandabilityResult run_expandability(const Population& pop, const Population& added, const SimulationOptions& opts,
                                      std::uint64_t phase1, std::uint64_t phase2) {
  const std::uint64_t total = phase1 + phase2;
  if (opts.checkpoint_every < 1 || total < opts.checkpoint_every)
    throw ArgumentError("need total_judgements >= checkpoint_every >= 1");
  std::set<std::string> ids;
  for (const auto& it : pop.items) ids.insert(it.id);
  for (const auto& it : added.items)
    if (!ids.insert(it.id).second) throw ArgumentError("item id '" + it.id + "' appears in both populations");

  EloState state(opts.config);
  std::vector<double> truth;
  for (const auto& it : pop.items) {
    state.add_item(it.id, kSimGroup);
    truth.push_back(it.truth);
  }
  const std::size_t original = pop.items.size();
  Rng rng(opts.seed);
  ExpandabilityResult res;

  auto original_scores = [&] {
    std::vector<double> s(original);
    for (std::size_t i = 0; i < original; ++i) s[i] = state.items()[i].score;
    return s;
  };

  for (std::uint64_t t = 1; t <= total; ++t) {
    const auto [a, b] = next_pair(state, opts.strategy, rng, opts.window);
    state.apply_indices(a, b, simulate_judgement(truth[a], truth[b], pop.truth_m, rng));

    if (t % opts.checkpoint_every == 0 || t == total) {
      res.curve.points.push_back({t, srcc_over(state, truth, truth.size())});
      res.original_curve.points.push_back({t, srcc_over(state, truth, original)});
    }
    if (t == phase1) {
      res.pre_add_scores = original_scores();
      res.original_srcc_before = srcc_over(state, truth, original);
      for (const auto& it : added.items) {
        state.add_item(it.id, kSimGroup);
        truth.push_back(it.truth);
      }
    }
  }
  res.post_add_scores = original_scores();
  res.original_srcc_after = srcc_over(state, truth, original);
  res.combined_srcc_after = srcc_over(state, truth, truth.size());
  return res;
}

std::string curve_csv(const ConvergenceCurve& curve) {
  std::ostringstream out;
  out << "judgements,srcc\n";
  out.precision(10);
  for (const Checkpoint& c : curve.points) out << c.judgements << ',' << c.srcc << '\n';
  return out.str();
}

}  // namespace iqa::elo
