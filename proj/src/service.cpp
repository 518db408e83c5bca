#include "tmw/service.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "tmw/errors.hpp"

namespace tmw {

using nlohmann::json;

struct Workbench::Project {
  std::string id;
  std::string name;
  std::string source_lang;
  std::string target_lang;
  std::vector<std::string> segment_order;
  std::map<std::string, Segment> segments;
  TranslationMemory tm;
  SuggestionTables tables;
  std::map<std::string, Session> sessions;
  std::map<std::pair<std::string, std::string>, std::string> chosen;  // (session, segment) -> entry id
  std::size_t next_session = 1;
  mutable std::shared_mutex mu;

  const Segment& segment(const std::string& segment_id) const {
    const auto it = segments.find(segment_id);
    if (it == segments.end()) throw NotFound("segment " + segment_id + " not in project " + id, segment_id);
    return it->second;
  }

  Session& session(const std::string& session_id) {
    const auto it = sessions.find(session_id);
    if (it == sessions.end()) throw NotFound("session " + session_id + " not in project " + id, session_id);
    return it->second;
  }

  const Session& session(const std::string& session_id) const {
    return const_cast<Project*>(this)->session(session_id);
  }

  ProjectInfo info() const {
    return {id, name, source_lang, target_lang, segments.size(), tm.size(), sessions.size()};
  }
};

namespace {

// Ids end up in URLs and XML attributes.
void check_id(const std::string& kind, const std::string& value) {
  if (value.empty()) throw InvalidInput(kind + " must not be empty");
  if (value.size() > 256) throw InvalidInput(kind + " is longer than 256 bytes");
  for (const char c : value) {
    if (static_cast<unsigned char>(c) < 0x20 || c == '/' || c == 0x7f) {
      throw InvalidInput(kind + " contains a control character or '/'");
    }
  }
}

json entry_to_json(const TmEntry& e) {
  auto links = json::array();
  for (const auto& l : e.alignment) links.push_back({l.source, l.target});
  return {{"id", e.id}, {"source", e.source.raw}, {"target", e.target.raw}, {"alignment", links}};
}

TmEntry entry_from_json(const json& j, const std::string& source_lang, const std::string& target_lang) {
  const auto id = j.at("id").get<std::string>();
  Alignment alignment;
  for (const auto& l : j.at("alignment")) alignment.push_back({l.at(0).get<std::size_t>(), l.at(1).get<std::size_t>()});
  return make_entry(id, make_segment(id + ":src", source_lang, j.at("source").get<std::string>()),
                    make_segment(id + ":tgt", target_lang, j.at("target").get<std::string>()),
                    std::move(alignment));
}

EditLogRecord record_from_json(const json& j) {
  EditLogRecord r;
  r.segment_id = j.at("segmentId").get<std::string>();
  r.translator_id = j.at("translatorId").get<std::string>();
  const auto origin = parse_origin(j.at("origin").get<std::string>());
  if (!origin) throw InvalidInput("bad origin in stored record");
  r.origin = *origin;
  r.initial_text = j.at("initialText").get<std::string>();
  r.final_text = j.at("finalText").get<std::string>();
  r.edit_time_ms = j.at("editTimeMs").get<std::int64_t>();
  r.counts.insertions = j.at("insertions").get<std::size_t>();
  r.counts.deletions = j.at("deletions").get<std::size_t>();
  r.counts.substitutions = j.at("substitutions").get<std::size_t>();
  r.counts.shifts = j.at("shifts").get<std::size_t>();
  const auto started = parse_rfc3339(j.at("startedAt").get<std::string>());
  const auto finished = parse_rfc3339(j.at("finishedAt").get<std::string>());
  if (!started || !finished) throw InvalidInput("bad timestamp in stored record");
  r.started_at = *started;
  r.finished_at = *finished;
  return r;
}

std::string required_string(const json& body, const char* field) {
  const auto it = body.find(field);
  if (it == body.end() || !it->is_string()) {
    throw InvalidInput(std::string("field '") + field + "' is required and must be a string");
  }
  return it->get<std::string>();
}

Timestamp required_time(const json& body, const char* field) {
  const auto t = parse_rfc3339(required_string(body, field));
  if (!t) throw InvalidInput(std::string("field '") + field + "' is not an RFC 3339 timestamp");
  return *t;
}

}  // namespace

PostEditPayload parse_payload(const json& body) {
  if (!body.is_object()) throw InvalidInput("payload must be a JSON object");
  PostEditPayload p;
  p.segment_id = required_string(body, "segmentId");
  const auto origin = parse_origin(required_string(body, "origin"));
  if (!origin) throw InvalidInput("field 'origin' must be one of TM, MT, APE, SCRATCH");
  p.origin = *origin;
  if (const auto it = body.find("initialText"); it != body.end() && !it->is_null()) {
    if (!it->is_string()) throw InvalidInput("field 'initialText' must be a string");
    p.initial_text = it->get<std::string>();
  } else if (p.origin != Origin::Scratch) {
    throw InvalidInput("field 'initialText' is required unless origin is SCRATCH");
  }
  p.final_text = required_string(body, "finalText");
  p.started_at = required_time(body, "startedAt");
  p.finished_at = required_time(body, "finishedAt");
  if (const auto it = body.find("entryId"); it != body.end() && !it->is_null()) {
    if (!it->is_string()) throw InvalidInput("field 'entryId' must be a string");
    p.entry_id = it->get<std::string>();
  }
  return p;
}

json to_json(const EditLogRecord& r) {
  return {{"segmentId", r.segment_id},
          {"translatorId", r.translator_id},
          {"origin", std::string(to_string(r.origin))},
          {"initialText", r.initial_text},
          {"finalText", r.final_text},
          {"editTimeMs", r.edit_time_ms},
          {"insertions", r.counts.insertions},
          {"deletions", r.counts.deletions},
          {"substitutions", r.counts.substitutions},
          {"shifts", r.counts.shifts},
          {"startedAt", format_rfc3339(r.started_at)},
          {"finishedAt", format_rfc3339(r.finished_at)}};
}

json to_json(const ProjectInfo& p) {
  return {{"id", p.id},
          {"name", p.name},
          {"sourceLang", p.source_lang},
          {"targetLang", p.target_lang},
          {"segments", p.segments},
          {"tmEntries", p.tm_entries},
          {"sessions", p.sessions}};
}

json to_json(const SessionInfo& s) {
  return {{"sessionId", s.session_id}, {"projectId", s.project_id}, {"translatorId", s.translator_id},
          {"records", s.records}};
}

namespace {

json warnings_json(const std::vector<ParseWarning>& warnings) {
  auto out = json::array();
  for (const auto& w : warnings) out.push_back({{"line", w.line}, {"message", w.message}});
  return out;
}

}  // namespace

json to_json(const UploadReport& r) {
  return {{"added", r.added}, {"warnings", warnings_json(r.warnings)}, {"duplicates", r.duplicates}};
}

json to_json(const IngestReport& r) { return {{"stored", r.stored}, {"warnings", warnings_json(r.warnings)}}; }

json to_json(const Alignment& alignment) {
  auto out = json::array();
  for (const auto& l : alignment) out.push_back({l.source, l.target});
  return out;
}

Workbench::Workbench(std::filesystem::path data_dir, ServiceConfig config)
    : config_(config), store_(std::move(data_dir)) {
  if (config_.retrieval.n > config_.retrieval.k) {
    throw InvalidInput("retrieval n (" + std::to_string(config_.retrieval.n) + ") exceeds k (" +
                       std::to_string(config_.retrieval.k) + ")");
  }
  store_.recover([this](const json& state) { load_snapshot(state); }, [this](const json& event) { apply(event); });
}

Workbench::~Workbench() = default;

Workbench::Project& Workbench::find_project(const std::string& id) const {
  std::shared_lock lock(registry_mu_);
  const auto it = projects_.find(id);
  if (it == projects_.end()) throw NotFound("project " + id + " not found", id);
  return *it->second;
}

// Mutates in-memory state only. Callers hold the locks (or are recovering).
void Workbench::apply(const json& event) {
  const auto type = event.at("type").get<std::string>();
  if (type == "project_created") {
    auto p = std::make_unique<Project>();
    p->id = event.at("id").get<std::string>();
    p->name = event.at("name").get<std::string>();
    p->source_lang = event.at("sourceLang").get<std::string>();
    p->target_lang = event.at("targetLang").get<std::string>();
    const std::string id = p->id;
    projects_.emplace(id, std::move(p));
    ++next_project_;
    return;
  }

  Project& p = *projects_.at(event.at("project").get<std::string>());
  if (type == "segments_added") {
    for (const auto& s : event.at("segments")) {
      const auto id = s.at("id").get<std::string>();
      p.segments.emplace(id, make_segment(id, p.source_lang, s.at("text").get<std::string>()));
      p.segment_order.push_back(id);
    }
  } else if (type == "tm_added") {
    std::vector<TmEntry> entries;
    for (const auto& e : event.at("entries")) entries.push_back(entry_from_json(e, p.source_lang, p.target_lang));
    p.tm.add_batch(std::move(entries));
  } else if (type == "table_ingested") {
    const auto origin = parse_origin(event.at("origin").get<std::string>());
    for (const auto& row : event.at("rows")) p.tables.put(*origin, row.at(0).get<std::string>(), row.at(1).get<std::string>());
  } else if (type == "session_created") {
    Session s;
    s.session_id = event.at("session").get<std::string>();
    s.project_id = p.id;
    s.translator_id = event.at("translator").get<std::string>();
    p.sessions.emplace(s.session_id, std::move(s));
    ++p.next_session;
  } else if (type == "record_submitted") {
    const auto session_id = event.at("session").get<std::string>();
    EditLogRecord r = record_from_json(event.at("record"));
    if (const auto it = event.find("entryId"); it != event.end()) {
      p.chosen[{session_id, r.segment_id}] = it->get<std::string>();
    }
    append_record(p.session(session_id), std::move(r));
  } else {
    throw InvalidInput("unknown journal event type '" + type + "'");
  }
}

json Workbench::state_json() const {
  auto projects = json::array();
  for (const auto& [id, pp] : projects_) {
    const Project& p = *pp;
    auto segments = json::array();
    for (const auto& sid : p.segment_order) segments.push_back({{"id", sid}, {"text", p.segments.at(sid).raw}});
    auto tm = json::array();
    for (const auto& [eid, e] : p.tm.entries()) tm.push_back(entry_to_json(e));
    auto tables = json::array();
    for (const auto& [key, text] : p.tables.rows()) tables.push_back({to_string(key.first), key.second, text});
    auto sessions = json::array();
    for (const auto& [sid, s] : p.sessions) {
      auto records = json::array();
      for (const auto& r : s.records) records.push_back(to_json(r));
      sessions.push_back({{"id", sid}, {"translator", s.translator_id}, {"records", records}});
    }
    auto chosen = json::array();
    for (const auto& [key, eid] : p.chosen) chosen.push_back({key.first, key.second, eid});
    projects.push_back({{"id", p.id},
                        {"name", p.name},
                        {"sourceLang", p.source_lang},
                        {"targetLang", p.target_lang},
                        {"nextSession", p.next_session},
                        {"segments", segments},
                        {"tm", tm},
                        {"tables", tables},
                        {"sessions", sessions},
                        {"chosen", chosen}});
  }
  return {{"nextProject", next_project_}, {"projects", projects}};
}

void Workbench::load_snapshot(const json& state) {
  projects_.clear();
  for (const auto& j : state.at("projects")) {
    auto p = std::make_unique<Project>();
    p->id = j.at("id").get<std::string>();
    p->name = j.at("name").get<std::string>();
    p->source_lang = j.at("sourceLang").get<std::string>();
    p->target_lang = j.at("targetLang").get<std::string>();
    p->next_session = j.at("nextSession").get<std::size_t>();
    for (const auto& s : j.at("segments")) {
      const auto sid = s.at("id").get<std::string>();
      p->segments.emplace(sid, make_segment(sid, p->source_lang, s.at("text").get<std::string>()));
      p->segment_order.push_back(sid);
    }
    std::vector<TmEntry> entries;
    for (const auto& e : j.at("tm")) entries.push_back(entry_from_json(e, p->source_lang, p->target_lang));
    p->tm.add_batch(std::move(entries));
    for (const auto& t : j.at("tables")) {
      p->tables.put(*parse_origin(t.at(0).get<std::string>()), t.at(1).get<std::string>(), t.at(2).get<std::string>());
    }
    for (const auto& s : j.at("sessions")) {
      Session session;
      session.session_id = s.at("id").get<std::string>();
      session.project_id = p->id;
      session.translator_id = s.at("translator").get<std::string>();
      for (const auto& r : s.at("records")) session.records.push_back(record_from_json(r));
      p->sessions.emplace(session.session_id, std::move(session));
    }
    for (const auto& c : j.at("chosen")) {
      p->chosen[{c.at(0).get<std::string>(), c.at(1).get<std::string>()}] = c.at(2).get<std::string>();
    }
    const std::string id = p->id;
    projects_.emplace(id, std::move(p));
  }
  next_project_ = state.at("nextProject").get<std::size_t>();
}

void Workbench::snapshot() {
  std::shared_lock registry(registry_mu_);
  std::vector<std::shared_lock<std::shared_mutex>> locks;
  for (const auto& [id, p] : projects_) locks.emplace_back(p->mu);
  store_.snapshot(state_json());
}

void Workbench::maybe_snapshot() {
  if (config_.snapshot_every != 0 && store_.events_since_snapshot() >= config_.snapshot_every) snapshot();
}

ProjectInfo Workbench::create_project(const std::string& name, const std::string& source_lang,
                                      const std::string& target_lang) {
  check_id("project name", name);
  check_id("source language", source_lang);
  check_id("target language", target_lang);
  ProjectInfo info;
  {
    std::unique_lock lock(registry_mu_);
    for (const auto& [id, p] : projects_) {
      if (p->name == name) throw Conflict("project name '" + name + "' is taken by " + id, name);
    }
    std::string id = "p" + std::to_string(next_project_);
    while (projects_.count(id) != 0) id += "x";
    const json event = {{"type", "project_created"},
                        {"id", id},
                        {"name", name},
                        {"sourceLang", source_lang},
                        {"targetLang", target_lang}};
    store_.append(event);
    apply(event);
    info = projects_.at(id)->info();
  }
  maybe_snapshot();
  return info;
}

std::vector<ProjectInfo> Workbench::list_projects() const {
  std::shared_lock registry(registry_mu_);
  std::vector<ProjectInfo> out;
  for (const auto& [id, p] : projects_) {
    std::shared_lock lock(p->mu);
    out.push_back(p->info());
  }
  return out;
}

ProjectInfo Workbench::project(const std::string& project_id) const {
  const Project& p = find_project(project_id);
  std::shared_lock lock(p.mu);
  return p.info();
}

std::size_t Workbench::add_segments(const std::string& project_id,
                                    const std::vector<std::pair<std::string, std::string>>& segments) {
  Project& p = find_project(project_id);
  {
    std::unique_lock lock(p.mu);
    std::set<std::string> batch;
    auto rows = json::array();
    for (const auto& [id, text] : segments) {
      check_id("segment id", id);
      if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw InvalidInput("segment " + id + " has no text");
      }
      if (p.segments.count(id) != 0 || !batch.insert(id).second) {
        throw Conflict("segment " + id + " already exists in project " + p.id, id);
      }
      rows.push_back({{"id", id}, {"text", text}});
    }
    if (!segments.empty()) {
      const json event = {{"type", "segments_added"}, {"project", p.id}, {"segments", rows}};
      store_.append(event);
      apply(event);
    }
  }
  maybe_snapshot();
  return segments.size();
}

std::vector<Segment> Workbench::segments(const std::string& project_id) const {
  const Project& p = find_project(project_id);
  std::shared_lock lock(p.mu);
  std::vector<Segment> out;
  for (const auto& id : p.segment_order) out.push_back(p.segments.at(id));
  return out;
}

UploadReport Workbench::upload_tm(const std::string& project_id, std::string_view file) {
  Project& p = find_project(project_id);
  UploadReport report;
  {
    std::unique_lock lock(p.mu);
    TmParseResult parsed = parse_tm_file(file, p.source_lang, p.target_lang);
    report.warnings = std::move(parsed.warnings);
    auto entries = json::array();
    for (const auto& e : parsed.entries) {
      if (p.tm.find(e.id) != nullptr) {
        report.duplicates.push_back(e.id);
        continue;
      }
      entries.push_back(entry_to_json(e));
    }
    report.added = entries.size();
    if (!entries.empty()) {
      const json event = {{"type", "tm_added"}, {"project", p.id}, {"entries", entries}};
      store_.append(event);
      apply(event);
    }
  }
  maybe_snapshot();
  return report;
}

IngestReport Workbench::ingest(const std::string& project_id, Origin origin, std::string_view table) {
  Project& p = find_project(project_id);
  IngestReport report;
  {
    std::unique_lock lock(p.mu);
    // Parse into a scratch table first so a rejected origin stores nothing.
    SuggestionTables scratch;
    report = ingest_external_table(scratch, origin, table);
    auto rows = json::array();
    for (const auto& [key, text] : scratch.rows()) rows.push_back({key.second, text});
    if (!rows.empty()) {
      const json event = {{"type", "table_ingested"}, {"project", p.id}, {"origin", to_string(origin)}, {"rows", rows}};
      store_.append(event);
      apply(event);
    }
  }
  maybe_snapshot();
  return report;
}

SuggestionSet Workbench::suggestions(const std::string& project_id, const std::string& segment_id) const {
  const Project& p = find_project(project_id);
  std::shared_lock lock(p.mu);
  const TableProvider provider(p.tables);
  return assemble_suggestions(p.segment(segment_id), p.tm, provider, config_.retrieval);
}

json Workbench::suggestions_json(const std::string& project_id, const std::string& segment_id) const {
  const Project& p = find_project(project_id);
  std::shared_lock lock(p.mu);
  const TableProvider provider(p.tables);
  return to_json(assemble_suggestions(p.segment(segment_id), p.tm, provider, config_.retrieval), p.tm);
}

SessionInfo Workbench::create_session(const std::string& project_id, const std::string& translator_id,
                                      std::optional<std::string> session_id) {
  check_id("translator id", translator_id);
  Project& p = find_project(project_id);
  SessionInfo info;
  {
    std::unique_lock lock(p.mu);
    std::string id;
    if (session_id) {
      check_id("session id", *session_id);
      if (p.sessions.count(*session_id) != 0) {
        throw Conflict("session " + *session_id + " already exists in project " + p.id, *session_id);
      }
      id = *session_id;
    } else {
      std::size_t n = p.next_session;
      do {
        id = "s" + std::to_string(n++);
      } while (p.sessions.count(id) != 0);
    }
    const json event = {{"type", "session_created"}, {"project", p.id}, {"session", id}, {"translator", translator_id}};
    store_.append(event);
    apply(event);
    info = {id, p.id, translator_id, 0};
  }
  maybe_snapshot();
  return info;
}

std::vector<SessionInfo> Workbench::sessions(const std::string& project_id) const {
  const Project& p = find_project(project_id);
  std::shared_lock lock(p.mu);
  std::vector<SessionInfo> out;
  for (const auto& [id, s] : p.sessions) out.push_back({id, p.id, s.translator_id, s.records.size()});
  return out;
}

EditLogRecord Workbench::submit_postedit(const std::string& project_id, const std::string& session_id,
                                         const PostEditPayload& payload) {
  Project& p = find_project(project_id);
  EditLogRecord record;
  {
    std::unique_lock lock(p.mu);
    const Session& session = p.session(session_id);
    p.segment(payload.segment_id);
    if (payload.entry_id) {
      if (payload.origin != Origin::TM) throw InvalidInput("entryId is only meaningful for TM records");
      if (p.tm.find(*payload.entry_id) == nullptr) {
        throw NotFound("TM entry " + *payload.entry_id + " not in project " + p.id, *payload.entry_id);
      }
    }
    record = make_record(session, payload.segment_id, payload.origin, payload.initial_text, payload.final_text,
                         payload.started_at, payload.finished_at);
    json event = {{"type", "record_submitted"}, {"project", p.id}, {"session", session_id}, {"record", to_json(record)}};
    if (payload.entry_id) event["entryId"] = *payload.entry_id;
    store_.append(event);
    apply(event);
  }
  maybe_snapshot();
  return record;
}

Session Workbench::session(const std::string& project_id, const std::string& session_id) const {
  const Project& p = find_project(project_id);
  std::shared_lock lock(p.mu);
  return p.session(session_id);
}

std::string Workbench::download_log(const std::string& project_id, const std::string& session_id) const {
  const Project& p = find_project(project_id);
  std::shared_lock lock(p.mu);
  return export_xml(p.session(session_id));
}

Alignment Workbench::export_alignments(const std::string& project_id, const std::string& session_id,
                                       const std::string& segment_id) const {
  const Project& p = find_project(project_id);
  std::shared_lock lock(p.mu);
  const Session& s = p.session(session_id);
  const auto it = std::find_if(s.records.begin(), s.records.end(),
                               [&](const EditLogRecord& r) { return r.segment_id == segment_id; });
  if (it == s.records.end()) {
    throw NotFound("no record for segment " + segment_id + " in session " + session_id, segment_id);
  }

  const TmEntry* chosen = nullptr;
  if (it->origin == Origin::TM) {
    if (const auto c = p.chosen.find({session_id, segment_id}); c != p.chosen.end()) {
      chosen = p.tm.find(c->second);
    } else {
      // No entry id was submitted: take the first entry whose target is the initial text.
      for (const auto& [id, e] : p.tm.entries()) {
        if (e.target.raw == it->initial_text) {
          chosen = &e;
          break;
        }
      }
    }
  }
  const std::size_t source_len =
      chosen != nullptr ? chosen->source.tokens.size() : p.segment(segment_id).tokens.size();
  return tmw::export_alignments(*it, chosen, source_len);
}

}  // namespace tmw
