#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmw/index.hpp"
#include "tmw/similarity.hpp"
#include "tmw/tm.hpp"

namespace tmw {

using EntryStore = std::map<std::string, TmEntry>;

struct RankedCandidate {
  std::string entry_id;
  double ir_score = 0.0;
  std::optional<SimilarityScore> sim;  // set after re-ranking
  bool exact = false;                  // source equals the query token for token

  bool operator==(const RankedCandidate&) const = default;
};

inline constexpr std::size_t kDefaultCandidates = 20;
inline constexpr std::size_t kDefaultSuggestions = 5;
inline constexpr std::size_t kBruteForceLimit = 1000;

enum class Execution { Serial, Parallel };

struct RetrievalConfig {
  std::size_t k = kDefaultCandidates;  // IR candidates handed to the re-ranker
  std::size_t n = kDefaultSuggestions;  // suggestions returned
  double min_similarity = 0.0;
  // Skip the index and score every entry; honoured only for TMs of at most
  // kBruteForceLimit entries.
  bool brute_force = false;
  Execution execution = Execution::Parallel;
};

// Entry store plus its index, kept in step. Same threading rules as Index.
class TranslationMemory {
 public:
  void add(TmEntry entry);
  // All-or-nothing; throws Conflict on the first duplicate id.
  void add_batch(std::vector<TmEntry> entries);

  const TmEntry* find(const std::string& id) const;
  const EntryStore& entries() const { return entries_; }
  const Index& index() const { return index_; }
  std::size_t size() const { return entries_.size(); }

 private:
  EntryStore entries_;
  Index index_;
};

// TF-IDF cosine (tf = raw count, idf = ln((N+1)/(df+1)) + 1) between the query
// and every entry sharing a term with it. Entries whose source equals the
// query token for token are flagged `exact`, scored 1 and ranked ahead of the
// rest; otherwise descending score, ties by ascending id. At most k results.
std::vector<RankedCandidate> ir_query(const Index& index, const Segment& query, std::size_t k,
                                      Execution execution = Execution::Parallel);

// IR prune to k, similarity re-rank, keep n. Ordering: similarity desc, then
// IR score desc, then entry id asc. Throws InvalidInput when n > k.
std::vector<RankedCandidate> retrieve_matches(const Index& index, const EntryStore& entries,
                                              const Segment& query, std::size_t k, std::size_t n,
                                              Execution execution = Execution::Parallel);

std::vector<RankedCandidate> retrieve_matches(const TranslationMemory& tm, const Segment& query,
                                              const RetrievalConfig& config = {});

// Orders re-ranked candidates by the retrieve_matches key.
void sort_by_similarity(std::vector<RankedCandidate>& candidates);

}  // namespace tmw
