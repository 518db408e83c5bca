#include "tmw/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace tmw::kernels {

namespace {

double cosine_one(const Index& index, const QueryVector& q, const std::string& entry_id) {
  const auto* terms = index.terms_of(entry_id);
  if (terms == nullptr || q.norm == 0.0) return 0.0;
  double dot = 0.0;
  double doc_sq = 0.0;
  auto qi = q.weights.begin();
  for (const auto& [term, tf] : *terms) {
    const double w = static_cast<double>(tf) * index.idf(term);
    doc_sq += w * w;
    while (qi != q.weights.end() && qi->first < term) ++qi;
    if (qi != q.weights.end() && qi->first == term) dot += qi->second * w;
  }
  if (doc_sq == 0.0) return 0.0;
  return dot / (q.norm * std::sqrt(doc_sq));
}

SimilarityScore similarity_one(const EntryStore& entries, const Segment& query, const std::string& entry_id) {
  const auto it = entries.find(entry_id);
  if (it == entries.end()) return {0.0};
  return tmw::similarity(query, it->second.source);
}

}  // namespace

QueryVector query_vector(const Index& index, const Segment& query) {
  std::map<std::string, std::size_t> counts;
  for (const auto& t : query.tokens) ++counts[t.norm];
  QueryVector q;
  double sq = 0.0;
  for (const auto& [term, tf] : counts) {
    const double w = static_cast<double>(tf) * index.idf(term);
    q.weights.emplace_back(term, w);
    sq += w * w;
  }
  q.norm = std::sqrt(sq);
  return q;
}

void cosine_serial(const Index& index, const QueryVector& q, std::span<RankedCandidate> candidates) {
  for (auto& c : candidates) c.ir_score = cosine_one(index, q, c.entry_id);
}

void cosine_parallel(const Index& index, const QueryVector& q, std::span<RankedCandidate> candidates) {
  const auto n = static_cast<std::ptrdiff_t>(candidates.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& c = candidates[static_cast<std::size_t>(i)];
    c.ir_score = cosine_one(index, q, c.entry_id);
  }
}

void similarity_serial(const EntryStore& entries, const Segment& query,
                       std::span<RankedCandidate> candidates) {
  for (auto& c : candidates) c.sim = similarity_one(entries, query, c.entry_id);
}

void similarity_parallel(const EntryStore& entries, const Segment& query,
                         std::span<RankedCandidate> candidates) {
  const auto n = static_cast<std::ptrdiff_t>(candidates.size());
  // Alignment cost varies a lot with sentence length.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& c = candidates[static_cast<std::size_t>(i)];
    c.sim = similarity_one(entries, query, c.entry_id);
  }
}

}  // namespace tmw::kernels
