#include "tmw/index.hpp"

#include <algorithm>
#include <cmath>

#include "tmw/errors.hpp"

namespace tmw {

std::string exact_key(const std::vector<std::string>& norms) {
  std::string key;
  for (const auto& n : norms) {
    key += n;
    key.push_back('\x1f');
  }
  return key;
}

void Index::add(const TmEntry& entry) {
  if (contains(entry.id)) throw Conflict("duplicate TM entry id " + entry.id, entry.id);

  std::map<std::string, std::size_t> counts;
  for (const auto& t : entry.source.tokens) ++counts[t.norm];

  for (const auto& [term, tf] : counts) {
    auto& list = postings_[term];
    const auto pos = std::lower_bound(list.begin(), list.end(), entry.id,
                                      [](const Posting& p, const std::string& id) { return p.entry_id < id; });
    list.insert(pos, Posting{entry.id, tf});
  }
  forward_[entry.id] = {counts.begin(), counts.end()};
  lengths_[entry.id] = entry.source.tokens.size();

  auto& ids = exact_[exact_key(norms_of(entry.source))];
  ids.insert(std::lower_bound(ids.begin(), ids.end(), entry.id), entry.id);
}

void Index::add_batch(std::span<const TmEntry> entries) {
  std::vector<const TmEntry*> sorted;
  sorted.reserve(entries.size());
  for (const auto& e : entries) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](const TmEntry* a, const TmEntry* b) { return a->id < b->id; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (contains(sorted[i]->id) || (i > 0 && sorted[i - 1]->id == sorted[i]->id)) {
      throw Conflict("duplicate TM entry id " + sorted[i]->id, sorted[i]->id);
    }
  }

  std::map<std::string, std::vector<Posting>> fresh;
  for (const TmEntry* e : sorted) {
    std::map<std::string, std::size_t> counts;
    for (const auto& t : e->source.tokens) ++counts[t.norm];
    for (const auto& [term, tf] : counts) fresh[term].push_back(Posting{e->id, tf});
    forward_[e->id] = {counts.begin(), counts.end()};
    lengths_[e->id] = e->source.tokens.size();
    auto& ids = exact_[exact_key(norms_of(e->source))];
    ids.insert(std::lower_bound(ids.begin(), ids.end(), e->id), e->id);
  }
  for (auto& [term, added] : fresh) {
    auto& list = postings_[term];
    const auto mid = static_cast<std::ptrdiff_t>(list.size());
    list.insert(list.end(), std::make_move_iterator(added.begin()), std::make_move_iterator(added.end()));
    std::inplace_merge(list.begin(), list.begin() + mid, list.end(),
                       [](const Posting& a, const Posting& b) { return a.entry_id < b.entry_id; });
  }
}

std::size_t Index::doc_frequency(const std::string& term) const {
  const auto it = postings_.find(term);
  return it == postings_.end() ? 0 : it->second.size();
}

std::optional<std::size_t> Index::length(const std::string& entry_id) const {
  const auto it = lengths_.find(entry_id);
  if (it == lengths_.end()) return std::nullopt;
  return it->second;
}

std::span<const Posting> Index::postings(const std::string& term) const {
  const auto it = postings_.find(term);
  if (it == postings_.end()) return {};
  return it->second;
}

double Index::idf(const std::string& term) const {
  const auto n = static_cast<double>(doc_count());
  const auto df = static_cast<double>(doc_frequency(term));
  return std::log((n + 1.0) / (df + 1.0)) + 1.0;
}

const std::vector<std::pair<std::string, std::size_t>>* Index::terms_of(const std::string& entry_id) const {
  const auto it = forward_.find(entry_id);
  return it == forward_.end() ? nullptr : &it->second;
}

std::span<const std::string> Index::exact_matches(const std::vector<std::string>& norms) const {
  const auto it = exact_.find(exact_key(norms));
  if (it == exact_.end()) return {};
  return it->second;
}

Index build_index(std::span<const TmEntry> entries) {
  Index index;
  index.add_batch(entries);
  return index;
}

Index add_entry(Index index, const TmEntry& entry) {
  index.add(entry);
  return index;
}

}  // namespace tmw
