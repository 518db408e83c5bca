#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tmw/retrieval.hpp"
#include "tmw/ter.hpp"
#include "tmw/tm.hpp"

namespace tmw {

enum class Color { Green, Red };

char color_code(Color c);  // 'G' / 'R'

struct TokenLabel {
  std::size_t index = 0;
  Color color = Color::Red;

  bool operator==(const TokenLabel&) const = default;
};

struct Span {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive
  Color color = Color::Red;

  bool operator==(const Span&) const = default;
};

struct ColoredSuggestion {
  std::string entry_id;
  std::vector<TokenLabel> source_labels;
  std::vector<TokenLabel> target_labels;
  SimilarityScore sim;
  double ir_score = 0.0;
  std::size_t green_target_count = 0;

  bool operator==(const ColoredSuggestion&) const = default;
};

// A TM source token is Green iff it is the reference side of a Match op in
// `script` (= ter_align(query, tm_source)). Throws InvalidInput when the
// script references tokens the segment does not have.
std::vector<TokenLabel> label_source(const Segment& query, const Segment& tm_source,
                                     const EditScript& script);

// A target token is Green iff it has at least one alignment link and every
// linked source token is Green. Entries without an alignment use
// diagonal_alignment(). Throws InvalidInput when `source_labels` does not
// cover the entry's source.
std::vector<TokenLabel> project_to_target(const std::vector<TokenLabel>& source_labels,
                                          const TmEntry& entry);

// Maximal equal-colour runs. Labels may arrive in any order but must cover
// 0..n-1 exactly once; gaps and duplicates throw InvalidInput.
std::vector<Span> merge_spans(std::vector<TokenLabel> labels);

std::vector<TokenLabel> expand_spans(const std::vector<Span>& spans);

ColoredSuggestion color_suggestion(const Segment& query, const TmEntry& entry,
                                   const RankedCandidate& candidate);

}  // namespace tmw
