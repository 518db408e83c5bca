#pragma once

// Data-parallel inner loops of the retrieval path. Each kernel has a serial
// reference and an OpenMP version; both produce identical output because
// every element is computed independently and written to its own slot.

#include <span>
#include <string>
#include <vector>

#include "tmw/index.hpp"
#include "tmw/retrieval.hpp"
#include "tmw/text.hpp"

namespace tmw::kernels {

// Query side of the cosine: term -> tf * idf, plus its Euclidean norm over all
// query terms (terms unseen by the index carry df = 0).
struct QueryVector {
  std::vector<std::pair<std::string, double>> weights;  // sorted by term
  double norm = 0.0;
};

QueryVector query_vector(const Index& index, const Segment& query);

// Cosine between the query and each listed entry.
void cosine_serial(const Index& index, const QueryVector& q, std::span<RankedCandidate> candidates);
void cosine_parallel(const Index& index, const QueryVector& q, std::span<RankedCandidate> candidates);

// Sets `sim` on each candidate: similarity(query, entry.source).
void similarity_serial(const EntryStore& entries, const Segment& query,
                       std::span<RankedCandidate> candidates);
void similarity_parallel(const EntryStore& entries, const Segment& query,
                         std::span<RankedCandidate> candidates);

inline void cosine(const Index& index, const QueryVector& q, std::span<RankedCandidate> c, Execution e) {
  e == Execution::Parallel ? cosine_parallel(index, q, c) : cosine_serial(index, q, c);
}

inline void similarity(const EntryStore& entries, const Segment& query, std::span<RankedCandidate> c,
                       Execution e) {
  e == Execution::Parallel ? similarity_parallel(entries, query, c) : similarity_serial(entries, query, c);
}

}  // namespace tmw::kernels
