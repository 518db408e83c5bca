#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmw/tm.hpp"

namespace tmw {

struct Posting {
  std::string entry_id;
  std::size_t term_frequency = 0;

  bool operator==(const Posting&) const = default;
};

// Inverted index over the source-side norms of TM entries.
//
// Const member functions are safe to call concurrently; add() needs exclusive
// access (callers hold a writer lock).
class Index {
 public:
  // Adds one entry. Throws Conflict when the id is already indexed.
  void add(const TmEntry& entry);

  // All-or-nothing: every id is checked (against the index and within the
  // batch) before anything is inserted. Postings are merged per term.
  void add_batch(std::span<const TmEntry> entries);

  bool contains(const std::string& entry_id) const { return lengths_.count(entry_id) != 0; }
  std::size_t doc_count() const { return lengths_.size(); }
  std::size_t doc_frequency(const std::string& term) const;
  std::optional<std::size_t> length(const std::string& entry_id) const;

  // Sorted by entry id; empty for unknown terms.
  std::span<const Posting> postings(const std::string& term) const;

  // ln((N+1)/(df+1)) + 1
  double idf(const std::string& term) const;

  // Per-entry term counts (forward index), sorted by term.
  const std::vector<std::pair<std::string, std::size_t>>* terms_of(const std::string& entry_id) const;

  // Entries whose source norm sequence equals `norms` exactly, ascending id.
  std::span<const std::string> exact_matches(const std::vector<std::string>& norms) const;

  const std::map<std::string, std::vector<Posting>>& all_postings() const { return postings_; }

  bool operator==(const Index&) const = default;

 private:
  std::map<std::string, std::vector<Posting>> postings_;
  std::map<std::string, std::size_t> lengths_;
  std::map<std::string, std::vector<std::pair<std::string, std::size_t>>> forward_;
  std::map<std::string, std::vector<std::string>> exact_;
};

// Throws Conflict naming the first duplicate id.
Index build_index(std::span<const TmEntry> entries);

// Copy-and-add form of Index::add.
Index add_entry(Index index, const TmEntry& entry);

std::string exact_key(const std::vector<std::string>& norms);

}  // namespace tmw
