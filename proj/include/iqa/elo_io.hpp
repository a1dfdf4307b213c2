#pragma once

#include <istream>
#include <string>
#include <vector>

#include "json.hpp"

#include "iqa/elo.hpp"

namespace iqa::elo {

/// One JSON object, fields in order: seq, item_a, item_b, winner, rater_id,
/// timestamp_ms. No trailing newline.
std::string to_jsonl(const JudgementRecord& j);
JudgementRecord judgement_from_json(const nlohmann::json& obj);

/// Parses a JSON-lines judgement log; blank lines are skipped. Malformed
/// lines raise LogIntegrityError with the zero-based record index.
std::vector<JudgementRecord> read_jsonl(std::istream& in);

/// {item_id: {score, n_judgements, trailing_scores}} in registration order.
nlohmann::ordered_json snapshot_json(const EloState& state);

}  // namespace iqa::elo
