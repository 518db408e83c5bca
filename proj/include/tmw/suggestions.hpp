#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tmw/color.hpp"
#include "tmw/origin.hpp"
#include "tmw/retrieval.hpp"
#include "tmw/tm.hpp"

namespace tmw {

struct ExternalRow {
  std::string segment_id;
  std::string translation;

  bool operator==(const ExternalRow&) const = default;
};

struct ExternalTable {
  std::vector<ExternalRow> rows;
  std::vector<ParseWarning> warnings;
};

// "segmentId TAB translation" per line. Blank lines are skipped; a line with
// no tab, an empty id or an empty translation is reported and skipped.
ExternalTable parse_external_table(std::string_view text);

struct IngestReport {
  std::size_t stored = 0;
  std::vector<ParseWarning> warnings;
};

// Third-party MT / APE output keyed by (origin, segment id). Last write wins.
class SuggestionTables {
 public:
  void put(Origin origin, const std::string& segment_id, std::string translation);
  std::optional<std::string> lookup(Origin origin, const std::string& segment_id) const;

  const std::map<std::pair<Origin, std::string>, std::string>& rows() const { return rows_; }

  bool operator==(const SuggestionTables&) const = default;

 private:
  std::map<std::pair<Origin, std::string>, std::string> rows_;
};

// Only Origin::MT and Origin::APE are accepted (InvalidInput otherwise).
IngestReport ingest_external_table(SuggestionTables& tables, Origin origin, std::string_view text);

// Source of non-TM suggestions. Only the table-backed provider ships; a live
// engine client would implement the same interface.
class SuggestionProvider {
 public:
  virtual ~SuggestionProvider() = default;
  virtual std::optional<std::string> suggest(Origin origin, const Segment& segment) const = 0;
};

class TableProvider final : public SuggestionProvider {
 public:
  explicit TableProvider(const SuggestionTables& tables) : tables_(tables) {}
  std::optional<std::string> suggest(Origin origin, const Segment& segment) const override {
    return tables_.lookup(origin, segment.id);
  }

 private:
  const SuggestionTables& tables_;
};

struct SuggestionSet {
  std::string segment_id;
  std::vector<ColoredSuggestion> tm;  // retrieve_matches order
  std::optional<std::string> mt;
  std::optional<std::string> ape;

  bool operator==(const SuggestionSet&) const = default;
};

SuggestionSet assemble_suggestions(const Segment& segment, const TranslationMemory& tm,
                                   const SuggestionProvider& provider, const RetrievalConfig& config = {});

// Span JSON served to the editor:
// {"segmentId", "tm": [{"entryId", "sim", "sourceSpans": [[start, end, "G"|"R"], ...],
//   "targetSpans": [...], "ir", "greenTargetCount", "sourceTokens", "targetTokens"}],
//  "mt", "ape"}   (mt / ape are null when absent)
nlohmann::json to_json(const SuggestionSet& set, const TranslationMemory& tm);

nlohmann::json spans_to_json(const std::vector<Span>& spans);

}  // namespace tmw
