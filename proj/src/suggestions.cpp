#include "tmw/suggestions.hpp"

#include "tmw/errors.hpp"

namespace tmw {

ExternalTable parse_external_table(std::string_view text) {
  ExternalTable table;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      table.warnings.push_back({lineno, "expected segmentId<TAB>translation"});
      continue;
    }
    ExternalRow row{std::string(line.substr(0, tab)), std::string(line.substr(tab + 1))};
    if (row.segment_id.empty()) {
      table.warnings.push_back({lineno, "empty segment id"});
      continue;
    }
    if (row.translation.empty()) {
      table.warnings.push_back({lineno, "empty translation"});
      continue;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void SuggestionTables::put(Origin origin, const std::string& segment_id, std::string translation) {
  rows_[{origin, segment_id}] = std::move(translation);
}

std::optional<std::string> SuggestionTables::lookup(Origin origin, const std::string& segment_id) const {
  const auto it = rows_.find({origin, segment_id});
  if (it == rows_.end()) return std::nullopt;
  return it->second;
}

IngestReport ingest_external_table(SuggestionTables& tables, Origin origin, std::string_view text) {
  if (origin != Origin::MT && origin != Origin::APE) {
    throw InvalidInput("only MT and APE tables can be ingested, got " + std::string(to_string(origin)));
  }
  ExternalTable parsed = parse_external_table(text);
  IngestReport report;
  report.warnings = std::move(parsed.warnings);
  for (auto& row : parsed.rows) {
    tables.put(origin, row.segment_id, std::move(row.translation));
    ++report.stored;
  }
  return report;
}

SuggestionSet assemble_suggestions(const Segment& segment, const TranslationMemory& tm,
                                   const SuggestionProvider& provider, const RetrievalConfig& config) {
  SuggestionSet set;
  set.segment_id = segment.id;
  for (const auto& candidate : retrieve_matches(tm, segment, config)) {
    const TmEntry* entry = tm.find(candidate.entry_id);
    if (entry == nullptr) continue;
    set.tm.push_back(color_suggestion(segment, *entry, candidate));
  }
  set.mt = provider.suggest(Origin::MT, segment);
  set.ape = provider.suggest(Origin::APE, segment);
  return set;
}

nlohmann::json spans_to_json(const std::vector<Span>& spans) {
  auto out = nlohmann::json::array();
  for (const auto& s : spans) {
    out.push_back(nlohmann::json::array({s.start, s.end, std::string(1, color_code(s.color))}));
  }
  return out;
}

nlohmann::json to_json(const SuggestionSet& set, const TranslationMemory& tm) {
  nlohmann::json out;
  out["segmentId"] = set.segment_id;
  out["tm"] = nlohmann::json::array();
  for (const auto& s : set.tm) {
    nlohmann::json card;
    card["entryId"] = s.entry_id;
    card["sim"] = s.sim.value;
    card["sourceSpans"] = spans_to_json(merge_spans(s.source_labels));
    card["targetSpans"] = spans_to_json(merge_spans(s.target_labels));
    card["ir"] = s.ir_score;
    card["greenTargetCount"] = s.green_target_count;
    auto source_tokens = nlohmann::json::array();
    auto target_tokens = nlohmann::json::array();
    if (const TmEntry* e = tm.find(s.entry_id)) {
      for (const auto& t : e->source.tokens) source_tokens.push_back(t.surface);
      for (const auto& t : e->target.tokens) target_tokens.push_back(t.surface);
      card["source"] = e->source.raw;
      card["target"] = e->target.raw;
    }
    card["sourceTokens"] = std::move(source_tokens);
    card["targetTokens"] = std::move(target_tokens);
    out["tm"].push_back(std::move(card));
  }
  out["mt"] = set.mt ? nlohmann::json(*set.mt) : nlohmann::json(nullptr);
  out["ape"] = set.ape ? nlohmann::json(*set.ape) : nlohmann::json(nullptr);
  return out;
}

}  // namespace tmw
