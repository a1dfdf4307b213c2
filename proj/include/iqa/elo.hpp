#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace iqa::elo {

struct EloConfig {
  double k = 16.0;               // largest possible change per judgement
  double m = 400.0;              // logistic scale
  double initial_score = 1400.0;
  int mos_window = 32;           // trailing per-item scores averaged into the MOS

  /// Throws std::invalid_argument naming the offending field ("K", "M",
  /// "initial_score", "mos_window").
  void validate() const;
  friend bool operator==(const EloConfig&, const EloConfig&) = default;
};

struct RatedItem {
  std::string id;
  std::string group;
  double score = 0.0;
  std::uint64_t judgements = 0;
  std::deque<double> trailing;  // most recent post-update scores, oldest first

  friend bool operator==(const RatedItem&, const RatedItem&) = default;
};

struct JudgementRecord {
  std::uint64_t seq = 0;
  std::string item_a;
  std::string item_b;
  std::string winner;
  std::string rater_id;
  std::int64_t timestamp_ms = 0;

  friend bool operator==(const JudgementRecord&, const JudgementRecord&) = default;
};

enum class Reason { unknown_item, same_item, cross_group, winner_not_in_pair };
std::string_view reason_code(Reason r);

/// A judgement the engine refuses to apply; state is left untouched.
class Rejection : public std::runtime_error {
public:
  Rejection(Reason reason, const std::string& detail);
  Reason reason() const noexcept { return reason_; }

private:
  Reason reason_;
};

/// Out-of-order, duplicate or gapped sequence numbers in a judgement log.
class LogIntegrityError : public std::runtime_error {
public:
  LogIntegrityError(std::size_t index, std::uint64_t seq, const std::string& detail);
  std::size_t index() const noexcept { return index_; }
  std::uint64_t seq() const noexcept { return seq_; }

private:
  std::size_t index_;
  std::uint64_t seq_;
};

/// No group holds two or more items.
class ExhaustionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// P(A preferred over B) = 1 / (1 + 10^((R_B - R_A) / M)).
double expected_probability(double score_a, double score_b, double m);

/// Rating state: items in registration order, grouped by reference image.
/// Single-writer; copy to snapshot.
class EloState {
public:
  explicit EloState(EloConfig config = {});

  const EloConfig& config() const { return config_; }

  /// Registers an item at the configured initial score. Duplicate ids throw
  /// std::invalid_argument.
  void add_item(const std::string& id, const std::string& group);
  /// Same, starting from a prior score instead of the initial one.
  void add_item(const std::string& id, const std::string& group, double score);
  bool contains(std::string_view id) const;
  const RatedItem& item(std::string_view id) const;
  const std::vector<RatedItem>& items() const { return items_; }
  std::size_t index_of(std::string_view id) const;

  /// Groups in first-seen order; each lists item indices in registration order.
  const std::vector<std::pair<std::string, std::vector<std::size_t>>>& groups() const { return groups_; }

  std::uint64_t judgement_count() const { return judgements_; }
  /// Sequence number the next logged judgement must carry (starts at 1).
  std::uint64_t next_seq() const { return judgements_ + 1; }
  double total_score() const;

  /// Applies one pairwise outcome and returns the updated (R_A', R_B').
  /// Throws Rejection without modifying the state.
  std::pair<double, double> apply(const JudgementRecord& j);
  /// Index-based update used by simulators; no validation beyond a != b.
  std::pair<double, double> apply_indices(std::size_t a, std::size_t b, bool a_wins);

  friend bool operator==(const EloState& l, const EloState& r) {
    return l.config_ == r.config_ && l.items_ == r.items_ && l.judgements_ == r.judgements_;
  }

private:
  void record(RatedItem& it, double score);

  EloConfig config_;
  std::vector<RatedItem> items_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups_;
  std::unordered_map<std::string, std::size_t> group_index_;
  std::uint64_t judgements_ = 0;
};

/// Validates then applies; same as `state.apply(j)`.
std::pair<double, double> apply_judgement(EloState& state, const JudgementRecord& j);

enum class Strategy { similar, random };
Strategy parse_strategy(std::string_view s);
std::string_view strategy_name(Strategy s);

inline constexpr int kSimilarWindow = 8;

using Rng = std::mt19937_64;

/// Draws a same-group pair of item indices. "similar": uniform group, uniform
/// anchor, opponent uniform among the `window` group-mates closest in score
/// (ties in distance broken at random).
/// "random": uniform group, uniform distinct pair. Throws ExhaustionError if
/// no group has two items.
std::pair<std::size_t, std::size_t> next_pair(const EloState& state, Strategy strategy, Rng& rng,
                                              int window = kSimilarWindow);

/// Mean of each item's trailing scores (current score if none), keyed by id.
std::map<std::string, double> finalize_mos(const EloState& state);

/// Applies `log` on top of `registered` (an EloState holding the items,
/// typically fresh). Each record's seq must equal the state's next_seq().
EloState replay(EloState registered, const std::vector<JudgementRecord>& log);

}  // namespace iqa::elo
