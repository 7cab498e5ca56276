#include "etma/session_store.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <mutex>
#include <random>

#include "etma/error.hpp"

namespace etma {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t seconds = std::chrono::system_clock::to_time_t(now);
  const auto millis =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() %
      1000;
  std::tm tm{};
  gmtime_r(&seconds, &tm);
  char buffer[96];
  std::snprintf(buffer, sizeof buffer, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(millis));
  return buffer;
}

void Session::rebuild_tree() { tree = apply_reduction(generate_complete(model), directives); }

void Session::record(std::string action) {
  history.push_back({std::move(action), utc_timestamp()});
}

Json to_json(const Session& session) {
  Json history = Json::array();
  for (const HistoryEntry& h : session.history) {
    history.push_back({{"action", h.action}, {"timestamp", h.timestamp}});
  }
  Json evaluations = Json::array();
  for (const Evaluation& e : session.evaluations) {
    evaluations.push_back(
        {{"label", e.label}, {"p_selected", e.p_selected}, {"p_complement", e.p_complement}});
  }
  Json doc = {{"format", kSessionFormat},
              {"id", session.id},
              {"parent", session.parent ? Json(*session.parent) : Json(nullptr)},
              {"model", to_json(session.model)},
              {"directives", to_json(std::span<const ReductionDirective>(session.directives))},
              {"table", session.table ? to_json(*session.table) : Json(nullptr)},
              {"generated", session.tree.has_value()},
              {"history", history},
              {"evaluations", evaluations}};
  return doc;
}

Session session_from_json(const Json& doc) {
  if (!doc.is_object() || doc.value("format", "") != kSessionFormat) {
    throw ParseError("/format", "not a session document");
  }
  Session session;
  try {
    session.id = doc.at("id").get<std::string>();
    if (!doc.at("parent").is_null()) session.parent = doc.at("parent").get<std::string>();
    session.model = model_from_json(doc.at("model"));
    session.directives = directives_from_json(doc.at("directives"));
    if (!doc.at("table").is_null()) session.table = table_from_json(doc.at("table"));
    for (const Json& h : doc.at("history")) {
      session.history.push_back({h.at("action").get<std::string>(),
                                 h.at("timestamp").get<std::string>()});
    }
    for (const Json& e : doc.at("evaluations")) {
      session.evaluations.push_back({e.at("label").get<std::string>(),
                                     e.at("p_selected").get<double>(),
                                     e.at("p_complement").get<double>()});
    }
    if (doc.at("generated").get<bool>()) session.rebuild_tree();
  } catch (const Json::exception& e) {
    throw ParseError("", std::string("malformed session: ") + e.what());
  }
  return session;
}

SessionStore::SessionStore(std::optional<std::filesystem::path> data_dir)
    : data_dir_(std::move(data_dir)) {
  if (!data_dir_) return;
  std::filesystem::create_directories(*data_dir_);
  for (const auto& entry : std::filesystem::directory_iterator(*data_dir_)) {
    if (entry.path().extension() != ".json") continue;
    Session session = session_from_json(read_json_file(entry.path()));
    auto slot = std::make_shared<Slot>();
    slot->session = std::move(session);
    slots_.emplace(slot->session.id, std::move(slot));
  }
}

std::string SessionStore::create(Session session) {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::unique_lock lock(mutex_);
  do {
    char suffix[17];
    std::snprintf(suffix, sizeof suffix, "%016llx", static_cast<unsigned long long>(rng()));
    session.id = model_hash(session.model).substr(0, 12) + "-" + suffix;
  } while (slots_.count(session.id));
  persist(session);
  auto slot = std::make_shared<Slot>();
  slot->session = std::move(session);
  const std::string id = slot->session.id;
  slots_.emplace(id, std::move(slot));
  return id;
}

std::optional<Session> SessionStore::get(const std::string& id) const {
  std::shared_ptr<Slot> slot;
  {
    std::shared_lock lock(mutex_);
    auto it = slots_.find(id);
    if (it == slots_.end()) return std::nullopt;
    slot = it->second;
  }
  std::shared_lock lock(slot->mutex);
  return slot->session;
}

bool SessionStore::update(const std::string& id, const std::function<void(Session&)>& mutate) {
  std::shared_ptr<Slot> slot;
  {
    std::shared_lock lock(mutex_);
    auto it = slots_.find(id);
    if (it == slots_.end()) return false;
    slot = it->second;
  }
  std::unique_lock lock(slot->mutex);
  Session draft = slot->session;
  mutate(draft);
  persist(draft);
  slot->session = std::move(draft);
  return true;
}

std::vector<std::pair<std::string, std::string>> SessionStore::list() const {
  std::shared_lock lock(mutex_);
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [id, slot] : slots_) {
    std::shared_lock slot_lock(slot->mutex);
    out.emplace_back(id, slot->session.model.name);
  }
  return out;
}

void SessionStore::persist(const Session& session) const {
  if (!data_dir_) return;
  const auto target = *data_dir_ / (session.id + ".json");
  const auto temporary = *data_dir_ / (session.id + ".json.tmp");
  write_text_file(temporary, dump(to_json(session)));
  std::filesystem::rename(temporary, target);
}

}  // namespace etma
