#pragma once

/// @file session_store.hpp
/// Analysis sessions and their persistence as one JSON file per session.

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "etma/event_tree.hpp"
#include "etma/json_io.hpp"
#include "etma/model.hpp"
#include "etma/reduction.hpp"

namespace etma {

inline constexpr std::string_view kSessionFormat = "etma-session/1";

struct HistoryEntry {
  std::string action;
  std::string timestamp;  ///< ISO-8601 UTC.
};

struct Evaluation {
  std::string label;
  double p_selected = 0.0;
  double p_complement = 0.0;
};

/// One analysis of one model. `tree`, when present, is the complete tree of
/// `model` reduced by `directives`; it is derived state and is rebuilt on
/// load rather than persisted.
struct Session {
  std::string id;
  std::optional<std::string> parent;
  SystemModel model;
  std::vector<ReductionDirective> directives;
  std::optional<ProbabilityTable> table;
  std::optional<EventTree> tree;
  std::vector<HistoryEntry> history;
  std::vector<Evaluation> evaluations;

  /// Regenerates `tree` from model and directives.
  void rebuild_tree();
  void record(std::string action);
};

Json to_json(const Session& session);
Session session_from_json(const Json& doc);

std::string utc_timestamp();

/// Thread-safe session map. Reads share a per-session lock; mutations of
/// one session are exclusive and commit only if the mutation succeeds.
class SessionStore {
 public:
  /// Loads every "*.json" session in `data_dir` (created if missing).
  explicit SessionStore(std::optional<std::filesystem::path> data_dir = std::nullopt);

  /// Assigns an id (model hash prefix + random suffix), persists, returns it.
  std::string create(Session session);
  std::optional<Session> get(const std::string& id) const;
  /// Returns false if the id is unknown. Exceptions from `mutate` propagate
  /// and leave the stored session unchanged.
  bool update(const std::string& id, const std::function<void(Session&)>& mutate);
  std::vector<std::pair<std::string, std::string>> list() const;  ///< (id, model name)

 private:
  struct Slot {
    mutable std::shared_mutex mutex;
    Session session;
  };

  void persist(const Session& session) const;

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
  std::optional<std::filesystem::path> data_dir_;
};

}  // namespace etma
