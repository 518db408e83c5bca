#include "tmw/retrieval.hpp"

#include <algorithm>
#include <set>
#include <string_view>

#include "tmw/errors.hpp"
#include "tmw/kernels.hpp"

namespace tmw {

void TranslationMemory::add(TmEntry entry) {
  index_.add(entry);
  const std::string id = entry.id;
  entries_.emplace(id, std::move(entry));
}

void TranslationMemory::add_batch(std::vector<TmEntry> entries) {
  index_.add_batch(entries);
  for (auto& e : entries) {
    const std::string id = e.id;
    entries_.emplace(id, std::move(e));
  }
}

const TmEntry* TranslationMemory::find(const std::string& id) const {
  const auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<RankedCandidate> ir_query(const Index& index, const Segment& query, std::size_t k,
                                      Execution execution) {
  if (k == 0 || query.tokens.empty()) return {};

  std::set<std::string_view> ids;
  for (const auto& t : query.tokens) {
    for (const auto& p : index.postings(t.norm)) ids.insert(p.entry_id);
  }
  if (ids.empty()) return {};

  const auto exact = index.exact_matches(norms_of(query));
  std::vector<RankedCandidate> out;
  out.reserve(ids.size());
  for (const auto id : ids) {
    RankedCandidate c;
    c.entry_id = std::string(id);
    c.exact = std::binary_search(exact.begin(), exact.end(), c.entry_id);
    out.push_back(std::move(c));
  }

  kernels::cosine(index, kernels::query_vector(index, query), out, execution);
  for (auto& c : out) {
    if (c.exact) c.ir_score = 1.0;
  }

  const auto key_less = [](const RankedCandidate& a, const RankedCandidate& b) {
    if (a.exact != b.exact) return a.exact;
    if (a.ir_score != b.ir_score) return a.ir_score > b.ir_score;
    return a.entry_id < b.entry_id;
  };
  if (out.size() > k) {
    std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k), out.end(), key_less);
    out.resize(k);
  } else {
    std::sort(out.begin(), out.end(), key_less);
  }
  return out;
}

void sort_by_similarity(std::vector<RankedCandidate>& candidates) {
  std::sort(candidates.begin(), candidates.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
    const double sa = a.sim ? a.sim->value : 0.0;
    const double sb = b.sim ? b.sim->value : 0.0;
    if (sa != sb) return sa > sb;
    if (a.ir_score != b.ir_score) return a.ir_score > b.ir_score;
    return a.entry_id < b.entry_id;
  });
}

std::vector<RankedCandidate> retrieve_matches(const Index& index, const EntryStore& entries,
                                              const Segment& query, std::size_t k, std::size_t n,
                                              Execution execution) {
  if (n > k) throw InvalidInput("suggestion count n must not exceed candidate count k");
  auto candidates = ir_query(index, query, k, execution);
  kernels::similarity(entries, query, candidates, execution);
  sort_by_similarity(candidates);
  if (candidates.size() > n) candidates.resize(n);
  return candidates;
}

std::vector<RankedCandidate> retrieve_matches(const TranslationMemory& tm, const Segment& query,
                                              const RetrievalConfig& config) {
  std::vector<RankedCandidate> out;
  if (config.brute_force && tm.size() <= kBruteForceLimit) {
    if (config.n > config.k) throw InvalidInput("suggestion count n must not exceed candidate count k");
    if (query.tokens.empty() || config.n == 0) return {};
    const auto exact = tm.index().exact_matches(norms_of(query));
    out.reserve(tm.size());
    for (const auto& [id, entry] : tm.entries()) {
      RankedCandidate c;
      c.entry_id = id;
      c.exact = std::binary_search(exact.begin(), exact.end(), id);
      out.push_back(std::move(c));
    }
    kernels::cosine(tm.index(), kernels::query_vector(tm.index(), query), out, config.execution);
    for (auto& c : out) {
      if (c.exact) c.ir_score = 1.0;
    }
    kernels::similarity(tm.entries(), query, out, config.execution);
    sort_by_similarity(out);
    if (out.size() > config.n) out.resize(config.n);
  } else {
    out = retrieve_matches(tm.index(), tm.entries(), query, config.k, config.n, config.execution);
  }
  std::erase_if(out, [&](const RankedCandidate& c) { return c.sim->value < config.min_similarity; });
  return out;
}

}  // namespace tmw
