#include "iqa/service.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "httplib.h"

#include "iqa/elo_io.hpp"

namespace iqa::service {
namespace fs = std::filesystem;

namespace {

Json error_body(std::string_view code, std::string_view detail) {
  return Json{{"error", code}, {"detail", detail}};
}

Reply not_found(const std::string& id) {
  return {404, Json{{"error", "not_found"}, {"experiment_id", id}}};
}

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void fsync_path(const fs::path& p, int flags) {
  const int fd = ::open(p.c_str(), flags | O_CLOEXEC);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

// Write-to-temp, fsync, rename: readers see the old file or the new one.
void write_atomically(const fs::path& p, const std::string& content) {
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fsync_path(tmp, O_RDONLY);
  fs::rename(tmp, p);
  fsync_path(p.parent_path(), O_RDONLY | O_DIRECTORY);
}

bool write_fully(int fd, const std::string& s) {
  std::size_t done = 0;
  while (done < s.size()) {
    const ssize_t n = ::write(fd, s.data() + done, s.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    done += static_cast<std::size_t>(n);
  }
  return true;
}

Json config_json(const elo::EloConfig& c) {
  return Json{{"K", c.k}, {"M", c.m}, {"initial_score", c.initial_score}, {"mos_window", c.mos_window}};
}

elo::EloConfig config_from_json(const Json& j) {
  elo::EloConfig c;
  if (j.is_null()) return c;
  if (j.contains("K")) c.k = j.at("K").get<double>();
  if (j.contains("M")) c.m = j.at("M").get<double>();
  if (j.contains("initial_score")) c.initial_score = j.at("initial_score").get<double>();
  if (j.contains("mos_window")) c.mos_window = j.at("mos_window").get<int>();
  return c;
}

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now().time_since_epoch()).count();
}

void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

bool is_nonempty_string(const Json& j, const char* key) {
  return j.contains(key) && j.at(key).is_string() && !j.at(key).get_ref<const std::string&>().empty();
}

}  // namespace

std::string iso8601(Clock::time_point t) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
  const std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[40];
  const std::size_t n = std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  std::snprintf(buf + n, sizeof buf - n, ".%03dZ", static_cast<int>(ms % 1000));
  return buf;
}

std::vector<Json> validate_experiment_request(const Json& body) {
  std::vector<Json> errors;
  auto fail = [&](std::string field, std::string msg) {
    errors.push_back(Json{{"field", std::move(field)}, {"message", std::move(msg)}});
  };
  if (!body.is_object()) {
    fail("body", "must be a JSON object");
    return errors;
  }
  for (const auto& [key, _] : body.items())
    if (key != "name" && key != "items" && key != "config") fail(key, "unknown field");
  if (!is_nonempty_string(body, "name")) fail("name", "required non-empty string");

  if (!body.contains("items") || !body.at("items").is_array() || body.at("items").empty()) {
    fail("items", "required non-empty array");
  } else {
    std::set<std::string> seen;
    std::map<std::string, int> group_sizes;
    const Json& items = body.at("items");
    for (std::size_t i = 0; i < items.size(); ++i) {
      const Json& it = items[i];
      const std::string at = "items[" + std::to_string(i) + "]";
      if (!it.is_object()) {
        fail(at, "must be an object");
        continue;
      }
      bool ok = true;
      if (!is_nonempty_string(it, "item_id")) {
        fail(at + ".item_id", "required non-empty string");
        ok = false;
      } else if (!seen.insert(it.at("item_id").get<std::string>()).second) {
        fail(at + ".item_id", "duplicate item id");
      }
      if (!is_nonempty_string(it, "group_id")) {
        fail(at + ".group_id", "required non-empty string");
        ok = false;
      }
      if (it.contains("media_uri") && !it.at("media_uri").is_string()) fail(at + ".media_uri", "must be a string");
      if (ok) ++group_sizes[it.at("group_id").get<std::string>()];
    }
    bool schedulable = false;
    for (const auto& [g, n] : group_sizes) schedulable = schedulable || n >= 2;
    if (!group_sizes.empty() && !schedulable) fail("items", "no group has two or more items");
  }

  if (body.contains("config")) {
    const Json& c = body.at("config");
    if (!c.is_object()) {
      fail("config", "must be an object");
    } else {
      for (const auto& [key, v] : c.items()) {
        if (key == "K" || key == "M") {
          if (!v.is_number() || !std::isfinite(v.get<double>()) || v.get<double>() <= 0.0)
            fail(key, key + " must be a positive number");
        } else if (key == "initial_score") {
          if (!v.is_number() || !std::isfinite(v.get<double>())) fail(key, "initial_score must be a finite number");
        } else if (key == "mos_window") {
          if (!v.is_number_integer() || v.get<long long>() < 1) fail(key, "mos_window must be an integer >= 1");
        } else {
          fail("config." + key, "unknown config field");
        }
      }
    }
  }
  return errors;
}

// ---------------------------------------------------------------------------

Experiment::Experiment(std::string id, std::string name, std::vector<ItemSpec> items, elo::EloConfig config,
                       std::string created_at, fs::path dir, std::uint64_t seed)
    : id_(std::move(id)),
      name_(std::move(name)),
      items_(std::move(items)),
      config_(config),
      created_at_(std::move(created_at)),
      dir_(std::move(dir)),
      working_(config) {
  for (std::size_t i = 0; i < items_.size(); ++i) {
    item_index_[items_[i].id] = i;
    working_.add_item(items_[i].id, items_[i].group);
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(std::hash<std::string>{}(id_))};
  rng_.seed(seq);
  publish(0);
}

Experiment::~Experiment() {
  if (log_fd_ >= 0) ::close(log_fd_);
}

void Experiment::create_files() const {
  fs::create_directories(dir_);
  Json items = Json::array();
  for (const ItemSpec& it : items_)
    items.push_back(Json{{"item_id", it.id}, {"group_id", it.group}, {"media_uri", it.media_uri}});
  const Json doc{{"experiment_id", id_},
                 {"name", name_},
                 {"created_at", created_at_},
                 {"config", config_json(config_)},
                 {"items", items}};
  { std::ofstream(dir_ / "judgements.jsonl", std::ios::app); }
  write_atomically(dir_ / "experiment.json", doc.dump(2) + "\n");
}

void Experiment::open_log() {
  if (log_fd_ >= 0) return;
  const fs::path p = dir_ / "judgements.jsonl";
  log_fd_ = ::open(p.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (log_fd_ < 0) throw std::runtime_error("cannot open " + p.string() + ": " + std::strerror(errno));
}

void Experiment::recover() {
  std::lock_guard lock(write_mutex_);
  const fs::path p = dir_ / "judgements.jsonl";
  std::string content = fs::exists(p) ? read_all(p) : std::string();
  const std::size_t end = content.rfind('\n') == std::string::npos ? 0 : content.rfind('\n') + 1;
  if (end != content.size()) {
    warn(id_ + ": dropping " + std::to_string(content.size() - end) + " bytes of unterminated log tail");
    if (::truncate(p.c_str(), static_cast<off_t>(end)) != 0)
      throw std::runtime_error("cannot truncate " + p.string());
    content.resize(end);
  }
  std::istringstream in(content);
  elo::EloState fresh(config_);
  for (const ItemSpec& it : items_) fresh.add_item(it.id, it.group);
  working_ = elo::replay(std::move(fresh), elo::read_jsonl(in));
  log_bytes_ = content.size();
  open_log();
  publish(log_bytes_);
  write_snapshot_file();
}

void Experiment::publish(std::uint64_t log_bytes) {
  auto snap = std::make_shared<const Snapshot>(Snapshot{working_, log_bytes});
  std::lock_guard lock(publish_mutex_);
  published_ = std::move(snap);
}

std::shared_ptr<const Snapshot> Experiment::snapshot() const {
  std::lock_guard lock(publish_mutex_);
  return published_;
}

void Experiment::write_snapshot_file() const {
  const Json doc{{"seq", working_.judgement_count()},
                 {"log_bytes", log_bytes_},
                 {"items", elo::snapshot_json(working_)}};
  write_atomically(dir_ / "snapshot.json", doc.dump() + "\n");
}

std::vector<std::string> Experiment::unschedulable_groups() const {
  std::vector<std::string> out;
  for (const auto& [g, members] : working_.groups())
    if (members.size() < 2) out.push_back(g);
  return out;
}

Json Experiment::describe() const {
  const auto snap = snapshot();
  Json items = Json::array();
  for (const ItemSpec& it : items_)
    items.push_back(Json{{"item_id", it.id}, {"group_id", it.group}, {"media_uri", it.media_uri}});
  Json groups = Json::array();
  for (const auto& [g, members] : snap->state.groups()) {
    Json ids = Json::array();
    for (std::size_t i : members) ids.push_back(snap->state.items()[i].id);
    groups.push_back(Json{{"group_id", g}, {"items", ids}, {"schedulable", members.size() >= 2}});
  }
  return Json{{"experiment_id", id_},
              {"name", name_},
              {"created_at", created_at_},
              {"config", config_json(config_)},
              {"items", items},
              {"groups", groups},
              {"total_judgements", snap->state.judgement_count()}};
}

Reply Experiment::next_pair(const std::string& rater_id, const ServiceConfig& cfg) {
  const auto snap = snapshot();
  std::lock_guard lock(pair_mutex_);
  std::pair<std::size_t, std::size_t> pick;
  try {
    pick = elo::next_pair(snap->state, cfg.strategy, rng_);
  } catch (const elo::ExhaustionError& e) {
    return {409, error_body("exhausted", e.what())};
  }
  const auto& a = snap->state.items()[pick.first];
  const auto& b = snap->state.items()[pick.second];

  char token[64];
  std::snprintf(token, sizeof token, "%s-%llu-%016llx", id_.c_str(), static_cast<unsigned long long>(++pair_counter_),
                static_cast<unsigned long long>(rng_()));
  PairAssignment pa;
  pa.pair_id = token;
  pa.group = a.group;
  pa.item_a = a.id;
  pa.item_b = b.id;
  pa.issued_at = Clock::now();
  pa.expires_at = pa.issued_at + cfg.pair_ttl;

  // Forget assignments long past expiry so the table stays bounded.
  if (pairs_.size() > 100000) {
    for (auto it = pairs_.begin(); it != pairs_.end();)
      it = it->second.expires_at + cfg.pair_ttl < pa.issued_at ? pairs_.erase(it) : std::next(it);
  }

  Json body{{"pair_id", pa.pair_id},
            {"experiment_id", id_},
            {"ref_group", pa.group},
            {"item_a", pa.item_a},
            {"item_b", pa.item_b},
            {"media_a", items_[item_index_.at(pa.item_a)].media_uri},
            {"media_b", items_[item_index_.at(pa.item_b)].media_uri},
            {"rater_id", rater_id},
            {"issued_at", iso8601(pa.issued_at)},
            {"expires_at", iso8601(pa.expires_at)}};
  pairs_.emplace(pa.pair_id, std::move(pa));
  return {200, std::move(body)};
}

Reply Experiment::submit(const Json& body, const ServiceConfig& cfg) {
  if (!body.is_object()) return {400, Json{{"error", "validation"}, {"fields", {{{"field", "body"}, {"message", "must be a JSON object"}}}}}};
  Json fields = Json::array();
  for (const char* key : {"item_a", "item_b", "winner", "rater_id"})
    if (!body.contains(key) || !body.at(key).is_string())
      fields.push_back(Json{{"field", key}, {"message", "required string"}});
  if (body.contains("pair_id") && !body.at("pair_id").is_string() && !body.at("pair_id").is_null())
    fields.push_back(Json{{"field", "pair_id"}, {"message", "must be a string"}});
  if (!fields.empty()) return {400, Json{{"error", "validation"}, {"fields", fields}}};

  elo::JudgementRecord rec;
  rec.item_a = body.at("item_a").get<std::string>();
  rec.item_b = body.at("item_b").get<std::string>();
  rec.winner = body.at("winner").get<std::string>();
  rec.rater_id = body.at("rater_id").get<std::string>();
  const std::string pair_id = body.contains("pair_id") && body.at("pair_id").is_string()
                                  ? body.at("pair_id").get<std::string>()
                                  : std::string();

  std::lock_guard write_lock(write_mutex_);
  std::string warning;
  PairAssignment* assignment = nullptr;
  if (!pair_id.empty()) {
    std::lock_guard lock(pair_mutex_);
    auto it = pairs_.find(pair_id);
    if (it == pairs_.end()) {
      warning = "unknown_assignment";
    } else {
      assignment = &it->second;
      const bool same = (assignment->item_a == rec.item_a && assignment->item_b == rec.item_b) ||
                        (assignment->item_a == rec.item_b && assignment->item_b == rec.item_a);
      if (!same)
        return {422, Json{{"error", "rejected"}, {"reason", "pair_mismatch"},
                          {"detail", "items differ from the assigned pair"}}};
      if (assignment->consumed) {
        // A retried submission: report the original outcome, apply nothing.
        if (assignment->winner != rec.winner)
          return {409, error_body("pair_already_judged", "pair " + pair_id + " was judged with another winner")};
        const auto snap = snapshot();
        const auto& st = snap->state;
        return {200, Json{{"seq", assignment->seq},
                          {"scores", {{rec.item_a, st.item(rec.item_a).score}, {rec.item_b, st.item(rec.item_b).score}}},
                          {"duplicate", true}}};
      }
      if (Clock::now() > assignment->expires_at) warning = "stale_assignment";
    }
  }

  rec.seq = working_.next_seq();
  rec.timestamp_ms = now_ms();
  std::pair<double, double> updated;
  try {
    updated = working_.apply(rec);
  } catch (const elo::Rejection& r) {
    return {422, Json{{"error", "rejected"}, {"reason", elo::reason_code(r.reason())}, {"detail", r.what()}}};
  }

  const std::string line = elo::to_jsonl(rec) + "\n";
  if (!write_fully(log_fd_, line) || ::fsync(log_fd_) != 0) {
    const std::string why = std::strerror(errno);
    working_ = snapshot()->state;
    if (::ftruncate(log_fd_, static_cast<off_t>(log_bytes_)) != 0) warn(id_ + ": could not roll back log tail");
    return {500, error_body("storage", "judgement log write failed: " + why)};
  }
  log_bytes_ += line.size();
  publish(log_bytes_);

  if (assignment) {
    std::lock_guard lock(pair_mutex_);
    assignment->consumed = true;
    assignment->seq = rec.seq;
    assignment->winner = rec.winner;
  }
  if (cfg.snapshot_every > 0 && rec.seq % cfg.snapshot_every == 0) {
    try {
      write_snapshot_file();
    } catch (const std::exception& e) {
      warn(id_ + ": snapshot failed: " + e.what());
    }
  }

  Json out{{"seq", rec.seq}, {"scores", {{rec.item_a, updated.first}, {rec.item_b, updated.second}}}};
  if (!warning.empty()) out["warning"] = warning;
  return {200, std::move(out)};
}

Json Experiment::scores() const {
  const auto snap = snapshot();
  const elo::EloState& st = snap->state;
  const auto mos = elo::finalize_mos(st);
  Json items = Json::array();
  for (const elo::RatedItem& it : st.items())
    items.push_back(Json{{"item_id", it.id},
                         {"group_id", it.group},
                         {"score", it.score},
                         {"n_judgements", it.judgements},
                         {"mos", mos.at(it.id)}});
  return Json{{"experiment_id", id_},
              {"seq", st.judgement_count()},
              {"total_judgements", st.judgement_count()},
              {"total_score", st.total_score()},
              {"items", items}};
}

std::string Experiment::export_log() const {
  const auto snap = snapshot();
  std::string out(snap->log_bytes, '\0');
  if (out.empty()) return out;
  std::ifstream in(dir_ / "judgements.jsonl", std::ios::binary);
  if (!in.read(out.data(), static_cast<std::streamsize>(out.size())))
    throw std::runtime_error("judgement log shorter than acknowledged");
  return out;
}

bool Experiment::audit() const {
  auto* self = const_cast<Experiment*>(this);
  std::lock_guard lock(self->write_mutex_);
  std::ifstream in(dir_ / "judgements.jsonl", std::ios::binary);
  elo::EloState fresh(config_);
  for (const ItemSpec& it : items_) fresh.add_item(it.id, it.group);
  return elo::replay(std::move(fresh), elo::read_jsonl(in)) == working_;
}

// ---------------------------------------------------------------------------

Service::Service(ServiceConfig config) : config_(std::move(config)) {
  if (config_.data_dir.empty()) throw std::invalid_argument("data directory is required");
  fs::create_directories(config_.data_dir);
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(config_.data_dir))
    if (entry.is_directory() && fs::exists(entry.path() / "experiment.json")) dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  for (const fs::path& dir : dirs) {
    const Json doc = Json::parse(read_all(dir / "experiment.json"));
    std::vector<ItemSpec> items;
    for (const Json& it : doc.at("items"))
      items.push_back({it.at("item_id").get<std::string>(), it.at("group_id").get<std::string>(),
                       it.value("media_uri", std::string())});
    const std::string id = doc.at("experiment_id").get<std::string>();
    auto exp = std::make_shared<Experiment>(id, doc.at("name").get<std::string>(), std::move(items),
                                            config_from_json(doc.at("config")),
                                            doc.at("created_at").get<std::string>(), dir, config_.seed);
    exp->recover();
    experiments_.emplace(id, std::move(exp));
    const auto dash = id.rfind('-');
    if (dash != std::string::npos) {
      try {
        next_number_ = std::max<std::uint64_t>(next_number_, std::stoull(id.substr(dash + 1)) + 1);
      } catch (const std::exception&) {
      }
    }
  }
}

std::shared_ptr<Experiment> Service::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = experiments_.find(id);
  return it == experiments_.end() ? nullptr : it->second;
}

std::vector<std::string> Service::experiment_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : experiments_) out.push_back(id);
  return out;
}

Reply Service::create_experiment(const Json& body) {
  const auto errors = validate_experiment_request(body);
  if (!errors.empty()) return {400, Json{{"error", "validation"}, {"fields", errors}}};

  std::vector<ItemSpec> items;
  for (const Json& it : body.at("items"))
    items.push_back({it.at("item_id").get<std::string>(), it.at("group_id").get<std::string>(),
                     it.value("media_uri", std::string())});
  const elo::EloConfig cfg = config_from_json(body.value("config", Json()));
  const std::string name = body.at("name").get<std::string>();

  std::unique_lock lock(mutex_);
  for (const auto& [_, exp] : experiments_)
    if (exp->name() == name) return {409, error_body("conflict", "experiment name already exists: " + name)};
  char id[32];
  std::snprintf(id, sizeof id, "exp-%04llu", static_cast<unsigned long long>(next_number_));
  auto exp = std::make_shared<Experiment>(id, name, std::move(items), cfg, iso8601(Clock::now()),
                                          config_.data_dir / id, config_.seed);
  exp->create_files();
  exp->recover();
  ++next_number_;
  experiments_.emplace(id, exp);

  Json unsched = Json::array();
  for (const auto& g : exp->unschedulable_groups()) unsched.push_back(g);
  return {201, Json{{"experiment_id", id}, {"unschedulable_groups", unsched}}};
}

Reply Service::get_experiment(const std::string& id) const {
  auto exp = find(id);
  if (!exp) return not_found(id);
  return {200, exp->describe()};
}

Reply Service::next_pair(const std::string& id, const std::string& rater_id) {
  auto exp = find(id);
  if (!exp) return not_found(id);
  return exp->next_pair(rater_id, config_);
}

Reply Service::submit_judgement(const std::string& id, const Json& body) {
  auto exp = find(id);
  if (!exp) return not_found(id);
  return exp->submit(body, config_);
}

Reply Service::get_scores(const std::string& id) const {
  auto exp = find(id);
  if (!exp) return not_found(id);
  return {200, exp->scores()};
}

std::optional<std::string> Service::export_log(const std::string& id) const {
  auto exp = find(id);
  if (!exp) return std::nullopt;
  return exp->export_log();
}

// ---------------------------------------------------------------------------

namespace {

void send(httplib::Response& res, const Reply& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const std::exception& e) {
      send(res, {500, error_body("internal", e.what())});
    }
  };
}

std::optional<Json> parse_body(const httplib::Request& req, httplib::Response& res) {
  try {
    return Json::parse(req.body);
  } catch (const Json::parse_error& e) {
    send(res, {400, Json{{"error", "validation"}, {"fields", {{{"field", "body"}, {"message", e.what()}}}}}});
    return std::nullopt;
  }
}

}  // namespace

void install_routes(httplib::Server& server, Service& service) {
  server.Post("/api/v1/experiments", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                if (auto body = parse_body(req, res)) send(res, service.create_experiment(*body));
              }));
  server.Get(R"(/api/v1/experiments/([^/]+))",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               send(res, service.get_experiment(req.matches[1]));
             }));
  server.Get(R"(/api/v1/experiments/([^/]+)/next-pair)",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               const std::string rater = req.get_param_value("rater_id");
               if (rater.empty()) {
                 send(res, {400, Json{{"error", "validation"},
                                      {"fields", {{{"field", "rater_id"}, {"message", "required query parameter"}}}}}});
                 return;
               }
               send(res, service.next_pair(req.matches[1], rater));
             }));
  server.Post(R"(/api/v1/experiments/([^/]+)/judgements)",
              guarded([&service](const httplib::Request& req, httplib::Response& res) {
                if (auto body = parse_body(req, res)) send(res, service.submit_judgement(req.matches[1], *body));
              }));
  server.Get(R"(/api/v1/experiments/([^/]+)/scores)",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               send(res, service.get_scores(req.matches[1]));
             }));
  server.Get(R"(/api/v1/experiments/([^/]+)/export)",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               const std::string id = req.matches[1];
               auto log = service.export_log(id);
               if (!log) {
                 send(res, not_found(id));
                 return;
               }
               res.status = 200;
               res.set_content(*log, "application/x-ndjson");
             }));
  if (!service.config().media_root.empty())
    server.set_mount_point("/media", service.config().media_root.string());
  if (!service.config().ui_root.empty()) server.set_mount_point("/", service.config().ui_root.string());
}

}  // namespace iqa::service
