#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tmw/editlog.hpp"
#include "tmw/origin.hpp"

namespace tmw {

// kappa = (po - pe) / (1 - pe). When pe == 1 (both raters constant on the
// same label) the result is 1.0 if the sequences agree everywhere, else 0.0.
// Throws InvalidInput on a length mismatch or empty input.
double cohen_kappa(std::span<const std::string> a, std::span<const std::string> b);

// Sample correlation. Throws InvalidInput on a length mismatch, fewer than two
// points, or a constant series.
double pearson_rho(std::span<const double> x, std::span<const double> y);

struct SelectionRow {
  std::string translator_id;
  std::map<Origin, std::size_t> counts;  // every origin present, possibly 0
  std::size_t total = 0;

  double rate(Origin origin) const;
};

struct SelectionTable {
  std::vector<SelectionRow> rows;  // ascending translator id
};

SelectionTable selection_rates(std::span<const EditLogRecord> records);

struct EditTypeFrequencies {
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t substitutions = 0;
  std::size_t shifts = 0;
  std::vector<std::size_t> record_totals;  // input order

  bool operator==(const EditTypeFrequencies&) const = default;
};

EditTypeFrequencies edit_type_frequencies(std::span<const EditLogRecord> records);

struct SeriesPoint {
  std::size_t total_edits = 0;
  std::int64_t edit_time_ms = 0;

  bool operator==(const SeriesPoint&) const = default;
};

// One point per record, ordered by finishedAt (stable for ties).
std::vector<SeriesPoint> time_edits_series(std::span<const EditLogRecord> records);

// Variables that can be compared between two translators.
enum class AgreementVariable { Selection, Time, Edits };

std::string_view to_string(AgreementVariable v);
std::optional<AgreementVariable> parse_agreement_variable(std::string_view text);

// Rule turning a continuous variable into categories before kappa. Only
// "terciles" exists: cut points at the 1/3 and 2/3 quantiles (linear
// interpolation) of the two translators' pooled values, labels "low" (<= q1),
// "mid" (<= q2) and "high".
struct Binning {
  std::string name = "terciles";
};

std::vector<std::string> bin_terciles(std::span<const double> values, std::span<const double> pooled);

// Linear-interpolation quantile of unsorted data, p in [0, 1].
double quantile(std::vector<double> values, double p);

struct KappaCell {
  std::string a;
  std::string b;  // a < b
  std::size_t common_segments = 0;
  std::optional<double> kappa;  // absent when there are no common segments
};

struct AgreementReport {
  AgreementVariable variable = AgreementVariable::Selection;
  std::string binning;  // empty for categorical variables
  std::vector<std::string> translators;
  std::vector<KappaCell> cells;  // upper triangle, row-major

  std::optional<double> kappa(const std::string& a, const std::string& b) const;
};

// Pairwise kappa over the segments both translators logged. When a
// translator has several records for one segment the last by finishedAt wins.
AgreementReport agreement_report(std::span<const EditLogRecord> records, AgreementVariable variable,
                                 const Binning& binning = {});

nlohmann::json to_json(const SelectionTable& table);
nlohmann::json to_json(const EditTypeFrequencies& freq);
nlohmann::json to_json(const AgreementReport& report);
nlohmann::json series_to_json(const std::vector<SeriesPoint>& series);

// "totalEdits,timeMs" header then one line per point.
std::string series_to_csv(const std::vector<SeriesPoint>& series);

// Pearson rho between total edits and edit time over the records.
nlohmann::json pearson_report(std::span<const EditLogRecord> records);

}  // namespace tmw
