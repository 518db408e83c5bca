#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tmw/errors.hpp"
#include "tmw/origin.hpp"
#include "tmw/tm.hpp"

namespace tmw {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

// "2024-05-01T09:30:00.250Z". Always UTC, always millisecond precision.
std::string format_rfc3339(Timestamp t);

// RFC 3339 date-time. Offsets are folded into UTC; fractions beyond
// milliseconds are truncated.
std::optional<Timestamp> parse_rfc3339(std::string_view text);

struct EditCounts {
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t substitutions = 0;
  std::size_t shifts = 0;

  std::size_t total() const { return insertions + deletions + substitutions + shifts; }
  bool operator==(const EditCounts&) const = default;
};

// TER counts for turning `initial` into `final` (both tokenized first).
EditCounts count_edits(std::string_view initial, std::string_view final_text);

struct EditLogRecord {
  std::string segment_id;
  std::string translator_id;
  Origin origin = Origin::Scratch;
  std::string initial_text;  // empty for Scratch
  std::string final_text;
  std::int64_t edit_time_ms = 0;
  EditCounts counts;
  Timestamp started_at{};
  Timestamp finished_at{};

  bool operator==(const EditLogRecord&) const = default;
};

struct Session {
  std::string session_id;
  std::string project_id;
  std::string translator_id;
  std::vector<EditLogRecord> records;  // ordered by finished_at

  bool operator==(const Session&) const = default;
};

// Validates and builds a record without touching the session: timestamps
// ordered, Scratch carries no initial text, text is XML-representable, and
// the segment has no record yet in this session. Throws InvalidInput or
// Conflict.
EditLogRecord make_record(const Session& session, const std::string& segment_id, Origin origin,
                          std::string initial_text, std::string final_text, Timestamp started_at,
                          Timestamp finished_at);

// Inserts keeping finished_at order (after records with the same time).
// Throws Conflict on a duplicate segment.
void append_record(Session& session, EditLogRecord record);

const EditLogRecord& record_postedit(Session& session, const std::string& segment_id, Origin origin,
                                     std::string initial_text, std::string final_text, Timestamp started_at,
                                     Timestamp finished_at);

class LogFormatError : public InvalidInput {
 public:
  LogFormatError(const std::string& path, const std::string& what)
      : InvalidInput(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// <session id project translator><records><record segment origin timeMs ins
// del sub shift started finished><initial/><final/></record>...</records>
// </session>, UTF-8, two-space indentation, attributes in that order.
std::string export_xml(const Session& session);

// Strict inverse of export_xml: unknown elements or attributes, missing
// attributes, bad numbers, timestamps or origins, duplicate segments and
// out-of-order records throw LogFormatError naming the element path.
Session import_xml(std::string_view xml);

// Source-to-final-text links for a submitted record. For TM records the
// chosen entry's alignment (diagonal when it has none) is carried through the
// edit script from the initial to the final text: deleted target tokens lose
// their links, matched and substituted tokens keep them, inserted tokens get
// none. Other origins get the diagonal alignment between the source segment
// and the final text.
Alignment export_alignments(const EditLogRecord& record, const TmEntry* chosen_entry,
                            std::size_t source_token_count);

}  // namespace tmw
