#include "iqa/elo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace iqa::elo {

void EloConfig::validate() const {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("K must be a positive finite number");
  if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("M must be a positive finite number");
  if (!std::isfinite(initial_score)) throw std::invalid_argument("initial_score must be finite");
  if (mos_window < 1) throw std::invalid_argument("mos_window must be >= 1");
}

std::string_view reason_code(Reason r) {
  switch (r) {
    case Reason::unknown_item: return "unknown_item";
    case Reason::same_item: return "same_item";
    case Reason::cross_group: return "cross_group";
    case Reason::winner_not_in_pair: return "winner_not_in_pair";
  }
  return "unknown";
}

Rejection::Rejection(Reason reason, const std::string& detail)
    : std::runtime_error(std::string(reason_code(reason)) + ": " + detail), reason_(reason) {}

LogIntegrityError::LogIntegrityError(std::size_t index, std::uint64_t seq, const std::string& detail)
    : std::runtime_error("judgement log record " + std::to_string(index) + " (seq " + std::to_string(seq) +
                         "): " + detail),
      index_(index),
      seq_(seq) {}

double expected_probability(double score_a, double score_b, double m) {
  return 1.0 / (1.0 + std::pow(10.0, (score_b - score_a) / m));
}

EloState::EloState(EloConfig config) : config_(config) { config_.validate(); }

void EloState::add_item(const std::string& id, const std::string& group) {
  add_item(id, group, config_.initial_score);
}

void EloState::add_item(const std::string& id, const std::string& group, double score) {
  if (!std::isfinite(score)) throw std::invalid_argument("score for '" + id + "' must be finite");
  if (index_.count(id) != 0) throw std::invalid_argument("duplicate item id '" + id + "'");
  const std::size_t idx = items_.size();
  items_.push_back({id, group, score, 0, {}});
  index_.emplace(id, idx);
  auto [it, fresh] = group_index_.try_emplace(group, groups_.size());
  if (fresh) groups_.emplace_back(group, std::vector<std::size_t>{});
  groups_[it->second].second.push_back(idx);
}

bool EloState::contains(std::string_view id) const { return index_.count(std::string(id)) != 0; }

std::size_t EloState::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw Rejection(Reason::unknown_item, "no item '" + std::string(id) + "'");
  return it->second;
}

const RatedItem& EloState::item(std::string_view id) const { return items_[index_of(id)]; }

double EloState::total_score() const {
  return std::accumulate(items_.begin(), items_.end(), 0.0,
                         [](double acc, const RatedItem& it) { return acc + it.score; });
}

void EloState::record(RatedItem& it, double score) {
  it.score = score;
  ++it.judgements;
  it.trailing.push_back(score);
  while (it.trailing.size() > static_cast<std::size_t>(config_.mos_window)) it.trailing.pop_front();
}

std::pair<double, double> EloState::apply(const JudgementRecord& j) {
  if (j.item_a == j.item_b) throw Rejection(Reason::same_item, "item_a and item_b are both '" + j.item_a + "'");
  const std::size_t a = index_of(j.item_a);
  const std::size_t b = index_of(j.item_b);
  if (items_[a].group != items_[b].group)
    throw Rejection(Reason::cross_group, "'" + j.item_a + "' and '" + j.item_b + "' belong to different groups");
  if (j.winner != j.item_a && j.winner != j.item_b)
    throw Rejection(Reason::winner_not_in_pair, "winner '" + j.winner + "' is not part of the pair");
  return apply_indices(a, b, j.winner == j.item_a);
}

std::pair<double, double> EloState::apply_indices(std::size_t a, std::size_t b, bool a_wins) {
  if (a == b) throw Rejection(Reason::same_item, "an item cannot be compared with itself");
  RatedItem& ia = items_[a];
  RatedItem& ib = items_[b];
  const double p_ab = expected_probability(ia.score, ib.score, config_.m);
  // S_B - P(B>A) = -(S_A - P(A>B)); applying one delta keeps R_A + R_B fixed.
  const double delta = config_.k * ((a_wins ? 1.0 : 0.0) - p_ab);
  record(ia, ia.score + delta);
  record(ib, ib.score - delta);
  ++judgements_;
  return {ia.score, ib.score};
}

std::pair<double, double> apply_judgement(EloState& state, const JudgementRecord& j) { return state.apply(j); }

Strategy parse_strategy(std::string_view s) {
  if (s == "similar") return Strategy::similar;
  if (s == "random") return Strategy::random;
  throw std::invalid_argument("unknown strategy '" + std::string(s) + "' (expected similar|random)");
}

std::string_view strategy_name(Strategy s) { return s == Strategy::similar ? "similar" : "random"; }

std::pair<std::size_t, std::size_t> next_pair(const EloState& state, Strategy strategy, Rng& rng, int window) {
  std::vector<const std::vector<std::size_t>*> eligible;
  for (const auto& [name, members] : state.groups())
    if (members.size() >= 2) eligible.push_back(&members);
  if (eligible.empty()) throw ExhaustionError("no group holds two or more items");
  if (window < 1) throw std::invalid_argument("similar-score window must be >= 1");

  const auto& group = *eligible[std::uniform_int_distribution<std::size_t>(0, eligible.size() - 1)(rng)];
  const std::size_t n = group.size();
  const std::size_t anchor_pos = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  const std::size_t anchor = group[anchor_pos];

  if (strategy == Strategy::random) {
    std::size_t other = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
    if (other >= anchor_pos) ++other;
    return {anchor, group[other]};
  }

  const double anchor_score = state.items()[anchor].score;
  // Equal distances are ordered by a random key; otherwise a fresh
  // experiment (all scores tied) would only ever pair the first few items.
  std::vector<std::tuple<double, std::uint64_t, std::size_t>> mates;
  mates.reserve(n - 1);
  for (std::size_t pos = 0; pos < n; ++pos)
    if (pos != anchor_pos) mates.emplace_back(std::abs(state.items()[group[pos]].score - anchor_score), rng(), pos);
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(window), mates.size());
  std::partial_sort(mates.begin(), mates.begin() + static_cast<std::ptrdiff_t>(w), mates.end());
  const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, w - 1)(rng);
  return {anchor, group[std::get<2>(mates[pick])]};
}

std::map<std::string, double> finalize_mos(const EloState& state) {
  std::map<std::string, double> mos;
  for (const RatedItem& it : state.items()) {
    if (it.trailing.empty()) {
      mos[it.id] = it.score;
      continue;
    }
    double sum = 0.0;
    for (double s : it.trailing) sum += s;
    mos[it.id] = sum / static_cast<double>(it.trailing.size());
  }
  return mos;
}

EloState replay(EloState registered, const std::vector<JudgementRecord>& log) {
  for (std::size_t i = 0; i < log.size(); ++i) {
    const JudgementRecord& j = log[i];
    const std::uint64_t expected = registered.next_seq();
    if (j.seq < expected) throw LogIntegrityError(i, j.seq, "duplicate or out-of-order seq, expected " + std::to_string(expected));
    if (j.seq > expected) throw LogIntegrityError(i, j.seq, "gap in seq, expected " + std::to_string(expected));
    registered.apply(j);
  }
  return registered;
}

}  // namespace iqa::elo
