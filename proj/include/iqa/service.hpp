#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"

#include "iqa/elo.hpp"

namespace httplib {
class Server;
}

namespace iqa::service {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::system_clock;

struct ServiceConfig {
  std::filesystem::path data_dir;
  std::filesystem::path media_root;  // served under /media when non-empty
  std::filesystem::path ui_root;     // served under / when non-empty
  std::uint64_t seed = 0;
  std::chrono::seconds pair_ttl{600};
  std::uint64_t snapshot_every = 100;  // judgements between snapshot.json rewrites
  elo::Strategy strategy = elo::Strategy::similar;
};

/// HTTP-shaped outcome of a service call.
struct Reply {
  int status = 200;
  Json body;
};

struct ItemSpec {
  std::string id;
  std::string group;
  std::string media_uri;
};

/// Immutable view published after every write; readers never see a
/// half-applied judgement.
struct Snapshot {
  elo::EloState state;
  std::uint64_t log_bytes = 0;  // length of judgements.jsonl covered by `state`
};

struct PairAssignment {
  std::string pair_id;
  std::string group;
  std::string item_a;
  std::string item_b;
  Clock::time_point issued_at;
  Clock::time_point expires_at;
  bool consumed = false;
  std::uint64_t seq = 0;  // set once a judgement used this pair
  std::string winner;
};

class Experiment {
public:
  Experiment(std::string id, std::string name, std::vector<ItemSpec> items, elo::EloConfig config,
             std::string created_at, std::filesystem::path dir, std::uint64_t seed);
  ~Experiment();
  Experiment(const Experiment&) = delete;
  Experiment& operator=(const Experiment&) = delete;

  /// Writes experiment.json and an empty log for a new experiment.
  void create_files() const;
  /// Rebuilds state from judgements.jsonl. A trailing partial line (a write
  /// cut short by a crash, never acknowledged) is truncated away.
  void recover();

  const std::string& id() const { return id_; }
  const std::string& name() const { return name_; }
  const std::vector<ItemSpec>& items() const { return items_; }
  const elo::EloConfig& config() const { return config_; }
  std::vector<std::string> unschedulable_groups() const;

  std::shared_ptr<const Snapshot> snapshot() const;
  Json describe() const;
  Reply next_pair(const std::string& rater_id, const ServiceConfig& cfg);
  Reply submit(const Json& body, const ServiceConfig& cfg);
  Json scores() const;
  /// Byte-exact log prefix matching the current snapshot.
  std::string export_log() const;
  /// Replays the on-disk log and compares it with live state.
  bool audit() const;

private:
  void open_log();
  void publish(std::uint64_t log_bytes);
  void write_snapshot_file() const;

  std::string id_;
  std::string name_;
  std::vector<ItemSpec> items_;
  std::map<std::string, std::size_t> item_index_;
  elo::EloConfig config_;
  std::string created_at_;
  std::filesystem::path dir_;

  std::mutex write_mutex_;  // serializes judgements
  elo::EloState working_;
  std::uint64_t log_bytes_ = 0;
  int log_fd_ = -1;

  mutable std::mutex publish_mutex_;  // guards only the pointer swap
  std::shared_ptr<const Snapshot> published_;

  std::mutex pair_mutex_;
  elo::Rng rng_;
  std::uint64_t pair_counter_ = 0;
  std::map<std::string, PairAssignment> pairs_;
};

class Service {
public:
  /// Loads every experiment under `config.data_dir`, replaying its log.
  explicit Service(ServiceConfig config);

  const ServiceConfig& config() const { return config_; }

  Reply create_experiment(const Json& body);
  Reply get_experiment(const std::string& id) const;
  Reply next_pair(const std::string& id, const std::string& rater_id);
  Reply submit_judgement(const std::string& id, const Json& body);
  Reply get_scores(const std::string& id) const;
  /// nullopt when the id is unknown.
  std::optional<std::string> export_log(const std::string& id) const;

  std::shared_ptr<Experiment> find(const std::string& id) const;
  std::vector<std::string> experiment_ids() const;

private:
  ServiceConfig config_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Experiment>> experiments_;
  std::uint64_t next_number_ = 1;
};

/// Validation errors for an experiment creation body, one entry per field.
std::vector<Json> validate_experiment_request(const Json& body);

std::string iso8601(Clock::time_point t);

/// Binds the REST routes, /media and the optional UI root onto `server`.
void install_routes(httplib::Server& server, Service& service);

}  // namespace iqa::service
