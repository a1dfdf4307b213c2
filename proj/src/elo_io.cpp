#include "iqa/elo_io.hpp"

namespace iqa::elo {

std::string to_jsonl(const JudgementRecord& j) {
  nlohmann::ordered_json o;
  o["seq"] = j.seq;
  o["item_a"] = j.item_a;
  o["item_b"] = j.item_b;
  o["winner"] = j.winner;
  o["rater_id"] = j.rater_id;
  o["timestamp_ms"] = j.timestamp_ms;
  return o.dump();
}

JudgementRecord judgement_from_json(const nlohmann::json& obj) {
  JudgementRecord j;
  j.seq = obj.at("seq").get<std::uint64_t>();
  j.item_a = obj.at("item_a").get<std::string>();
  j.item_b = obj.at("item_b").get<std::string>();
  j.winner = obj.at("winner").get<std::string>();
  j.rater_id = obj.at("rater_id").get<std::string>();
  j.timestamp_ms = obj.at("timestamp_ms").get<std::int64_t>();
  return j;
}

std::vector<JudgementRecord> read_jsonl(std::istream& in) {
  std::vector<JudgementRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(judgement_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw LogIntegrityError(out.size(), 0, std::string("malformed record: ") + e.what());
    }
  }
  return out;
}

nlohmann::ordered_json snapshot_json(const EloState& state) {
  nlohmann::ordered_json snap = nlohmann::ordered_json::object();
  for (const RatedItem& it : state.items()) {
    snap[it.id] = {{"score", it.score},
                   {"n_judgements", it.judgements},
                   {"trailing_scores", std::vector<double>(it.trailing.begin(), it.trailing.end())}};
  }
  return snap;
}

}  // namespace iqa::elo
