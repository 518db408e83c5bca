#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tmw/editlog.hpp"
#include "tmw/retrieval.hpp"
#include "tmw/store.hpp"
#include "tmw/suggestions.hpp"
#include "tmw/tm.hpp"

namespace tmw {

struct ServiceConfig {
  RetrievalConfig retrieval;
  std::size_t snapshot_every = 1000;  // journal events between snapshots; 0 = never
};

struct ProjectInfo {
  std::string id;
  std::string name;
  std::string source_lang;
  std::string target_lang;
  std::size_t segments = 0;
  std::size_t tm_entries = 0;
  std::size_t sessions = 0;
};

struct UploadReport {
  std::size_t added = 0;
  std::vector<ParseWarning> warnings;
  std::vector<std::string> duplicates;  // entry ids already in the TM
};

struct SessionInfo {
  std::string session_id;
  std::string project_id;
  std::string translator_id;
  std::size_t records = 0;
};

struct PostEditPayload {
  std::string segment_id;
  Origin origin = Origin::Scratch;
  std::string initial_text;
  std::string final_text;
  Timestamp started_at{};
  Timestamp finished_at{};
  std::optional<std::string> entry_id;  // TM entry the initial text came from
};

// {"segmentId", "origin", "initialText", "finalText", "startedAt", "finishedAt", "entryId"?}
PostEditPayload parse_payload(const nlohmann::json& body);

nlohmann::json to_json(const EditLogRecord& record);
nlohmann::json to_json(const ProjectInfo& info);
nlohmann::json to_json(const SessionInfo& info);
nlohmann::json to_json(const UploadReport& report);
nlohmann::json to_json(const IngestReport& report);
nlohmann::json to_json(const Alignment& alignment);

// Projects, TMs, suggestion tables and sessions behind one data directory.
// Every write is journaled (and fsync'd) before it becomes visible. Writes
// to one project are serialized; reads take a shared lock on the project.
class Workbench {
 public:
  explicit Workbench(std::filesystem::path data_dir, ServiceConfig config = {});
  ~Workbench();

  ProjectInfo create_project(const std::string& name, const std::string& source_lang,
                             const std::string& target_lang);
  std::vector<ProjectInfo> list_projects() const;
  ProjectInfo project(const std::string& project_id) const;

  // All-or-nothing; Conflict on an id already in the project or repeated in
  // the batch, InvalidInput on an empty id or text.
  std::size_t add_segments(const std::string& project_id,
                           const std::vector<std::pair<std::string, std::string>>& segments);
  std::vector<Segment> segments(const std::string& project_id) const;

  // Entries whose id is already present are reported and skipped; the rest
  // are added together or not at all.
  UploadReport upload_tm(const std::string& project_id, std::string_view file);

  IngestReport ingest(const std::string& project_id, Origin origin, std::string_view table);

  SuggestionSet suggestions(const std::string& project_id, const std::string& segment_id) const;
  nlohmann::json suggestions_json(const std::string& project_id, const std::string& segment_id) const;

  SessionInfo create_session(const std::string& project_id, const std::string& translator_id,
                             std::optional<std::string> session_id = std::nullopt);
  std::vector<SessionInfo> sessions(const std::string& project_id) const;

  EditLogRecord submit_postedit(const std::string& project_id, const std::string& session_id,
                                const PostEditPayload& payload);
  Session session(const std::string& project_id, const std::string& session_id) const;
  std::string download_log(const std::string& project_id, const std::string& session_id) const;
  Alignment export_alignments(const std::string& project_id, const std::string& session_id,
                              const std::string& segment_id) const;

  void snapshot();
  const ServiceConfig& config() const { return config_; }

 private:
  struct Project;

  Project& find_project(const std::string& id) const;
  void apply(const nlohmann::json& event);
  void load_snapshot(const nlohmann::json& state);
  nlohmann::json state_json() const;
  void maybe_snapshot();

  ServiceConfig config_;
  Store store_;
  mutable std::shared_mutex registry_mu_;
  std::map<std::string, std::unique_ptr<Project>> projects_;
  std::size_t next_project_ = 1;
};

}  // namespace tmw
