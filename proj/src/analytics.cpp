#include "tmw/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "tmw/errors.hpp"

namespace tmw {

double cohen_kappa(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() != b.size()) {
    throw InvalidInput("kappa needs equal lengths, got " + std::to_string(a.size()) + " and " +
                       std::to_string(b.size()));
  }
  if (a.empty()) throw InvalidInput("kappa needs at least one item");

  const double n = static_cast<double>(a.size());
  std::map<std::string_view, std::pair<std::size_t, std::size_t>> marginals;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++marginals[a[i]].first;
    ++marginals[b[i]].second;
    if (a[i] == b[i]) ++agree;
  }
  const double po = static_cast<double>(agree) / n;
  double pe = 0.0;
  for (const auto& [label, m] : marginals) {
    pe += (static_cast<double>(m.first) / n) * (static_cast<double>(m.second) / n);
  }
  if (pe >= 1.0) return agree == a.size() ? 1.0 : 0.0;
  return (po - pe) / (1.0 - pe);
}

double pearson_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InvalidInput("rho needs equal lengths, got " + std::to_string(x.size()) + " and " +
                       std::to_string(y.size()));
  }
  if (x.size() < 2) throw InvalidInput("rho needs at least two points");

  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw InvalidInput("rho is undefined for a constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double SelectionRow::rate(Origin origin) const {
  if (total == 0) return 0.0;
  const auto it = counts.find(origin);
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

SelectionTable selection_rates(std::span<const EditLogRecord> records) {
  std::map<std::string, SelectionRow> by_translator;
  for (const auto& r : records) {
    auto& row = by_translator[r.translator_id];
    if (row.counts.empty()) {
      row.translator_id = r.translator_id;
      for (const Origin o : kAllOrigins) row.counts[o] = 0;
    }
    ++row.counts[r.origin];
    ++row.total;
  }
  SelectionTable table;
  for (auto& [id, row] : by_translator) table.rows.push_back(std::move(row));
  return table;
}

EditTypeFrequencies edit_type_frequencies(std::span<const EditLogRecord> records) {
  EditTypeFrequencies f;
  for (const auto& r : records) {
    f.insertions += r.counts.insertions;
    f.deletions += r.counts.deletions;
    f.substitutions += r.counts.substitutions;
    f.shifts += r.counts.shifts;
    f.record_totals.push_back(r.counts.total());
  }
  return f;
}

std::vector<SeriesPoint> time_edits_series(std::span<const EditLogRecord> records) {
  std::vector<const EditLogRecord*> order;
  for (const auto& r : records) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](const EditLogRecord* a, const EditLogRecord* b) { return a->finished_at < b->finished_at; });
  std::vector<SeriesPoint> out;
  out.reserve(order.size());
  for (const auto* r : order) out.push_back({r->counts.total(), r->edit_time_ms});
  return out;
}

std::string_view to_string(AgreementVariable v) {
  switch (v) {
    case AgreementVariable::Selection: return "selection";
    case AgreementVariable::Time: return "time";
    case AgreementVariable::Edits: return "edits";
  }
  return "?";
}

std::optional<AgreementVariable> parse_agreement_variable(std::string_view text) {
  if (text == "selection") return AgreementVariable::Selection;
  if (text == "time") return AgreementVariable::Time;
  if (text == "edits") return AgreementVariable::Edits;
  return std::nullopt;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidInput("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<std::string> bin_terciles(std::span<const double> values, std::span<const double> pooled) {
  const std::vector<double> sample(pooled.begin(), pooled.end());
  const double q1 = quantile(sample, 1.0 / 3.0);
  const double q2 = quantile(sample, 2.0 / 3.0);
  std::vector<std::string> out;
  out.reserve(values.size());
  for (const double v : values) out.emplace_back(v <= q1 ? "low" : v <= q2 ? "mid" : "high");
  return out;
}

std::optional<double> AgreementReport::kappa(const std::string& a, const std::string& b) const {
  const auto& [lo, hi] = a < b ? std::pair{a, b} : std::pair{b, a};
  for (const auto& c : cells) {
    if (c.a == lo && c.b == hi) return c.kappa;
  }
  return std::nullopt;
}

AgreementReport agreement_report(std::span<const EditLogRecord> records, AgreementVariable variable,
                                 const Binning& binning) {
  if (variable != AgreementVariable::Selection && binning.name != "terciles") {
    throw InvalidInput("unknown binning rule '" + binning.name + "'");
  }

  // translator -> segment -> latest record
  std::map<std::string, std::map<std::string, const EditLogRecord*>> latest;
  for (const auto& r : records) {
    auto& slot = latest[r.translator_id][r.segment_id];
    if (slot == nullptr || !(r.finished_at < slot->finished_at)) slot = &r;
  }

  AgreementReport report;
  report.variable = variable;
  if (variable != AgreementVariable::Selection) report.binning = binning.name;
  for (const auto& [t, _] : latest) report.translators.push_back(t);

  const auto value_of = [variable](const EditLogRecord& r) {
    return variable == AgreementVariable::Time ? static_cast<double>(r.edit_time_ms)
                                               : static_cast<double>(r.counts.total());
  };

  for (std::size_t i = 0; i < report.translators.size(); ++i) {
    for (std::size_t j = i + 1; j < report.translators.size(); ++j) {
      const auto& ra = latest[report.translators[i]];
      const auto& rb = latest[report.translators[j]];
      std::vector<std::pair<const EditLogRecord*, const EditLogRecord*>> common;
      for (const auto& [seg, rec] : ra) {
        if (const auto it = rb.find(seg); it != rb.end()) common.emplace_back(rec, it->second);
      }

      KappaCell cell{report.translators[i], report.translators[j], common.size(), std::nullopt};
      if (!common.empty()) {
        std::vector<std::string> la, lb;
        if (variable == AgreementVariable::Selection) {
          for (const auto& [x, y] : common) {
            la.emplace_back(to_string(x->origin));
            lb.emplace_back(to_string(y->origin));
          }
        } else {
          std::vector<double> va, vb;
          for (const auto& [x, y] : common) {
            va.push_back(value_of(*x));
            vb.push_back(value_of(*y));
          }
          std::vector<double> pooled = va;
          pooled.insert(pooled.end(), vb.begin(), vb.end());
          la = bin_terciles(va, pooled);
          lb = bin_terciles(vb, pooled);
        }
        cell.kappa = cohen_kappa(la, lb);
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

nlohmann::json to_json(const SelectionTable& table) {
  auto rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json counts, rates;
    for (const Origin o : kAllOrigins) {
      counts[std::string(to_string(o))] = row.counts.at(o);
      rates[std::string(to_string(o))] = row.rate(o);
    }
    rows.push_back({{"translator", row.translator_id}, {"total", row.total}, {"counts", counts}, {"rates", rates}});
  }
  return {{"report", "selection"}, {"translators", rows}};
}

nlohmann::json to_json(const EditTypeFrequencies& f) {
  return {{"report", "edits"},
          {"insertions", f.insertions},
          {"deletions", f.deletions},
          {"substitutions", f.substitutions},
          {"shifts", f.shifts},
          {"recordTotals", f.record_totals}};
}

nlohmann::json to_json(const AgreementReport& report) {
  auto cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"a", c.a},
                     {"b", c.b},
                     {"commonSegments", c.common_segments},
                     {"kappa", c.kappa ? nlohmann::json(*c.kappa) : nlohmann::json(nullptr)}});
  }
  nlohmann::json out = {{"report", "kappa"},
                        {"variable", std::string(to_string(report.variable))},
                        {"translators", report.translators},
                        {"pairs", cells}};
  out["binning"] = report.binning.empty() ? nlohmann::json(nullptr) : nlohmann::json(report.binning);
  return out;
}

nlohmann::json series_to_json(const std::vector<SeriesPoint>& series) {
  auto points = nlohmann::json::array();
  for (const auto& p : series) points.push_back({{"totalEdits", p.total_edits}, {"timeMs", p.edit_time_ms}});
  return {{"report", "series"}, {"points", points}};
}

std::string series_to_csv(const std::vector<SeriesPoint>& series) {
  std::string out = "totalEdits,timeMs\n";
  for (const auto& p : series) {
    out += std::to_string(p.total_edits);
    out.push_back(',');
    out += std::to_string(p.edit_time_ms);
    out.push_back('\n');
  }
  return out;
}

nlohmann::json pearson_report(std::span<const EditLogRecord> records) {
  const auto series = time_edits_series(records);
  std::vector<double> edits, time;
  for (const auto& p : series) {
    edits.push_back(static_cast<double>(p.total_edits));
    time.push_back(static_cast<double>(p.edit_time_ms));
  }
  return {{"report", "pearson"}, {"x", "totalEdits"}, {"y", "timeMs"}, {"n", series.size()},
          {"rho", pearson_rho(edits, time)}};
}

}  // namespace tmw
