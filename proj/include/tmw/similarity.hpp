#pragma once

#include <cstddef>

#include "tmw/ter.hpp"
#include "tmw/text.hpp"

namespace tmw {

struct SimilarityScore {
  double value = 0.0;  // in [0, 1]

  auto operator<=>(const SimilarityScore&) const = default;
};

// Needleman-Wunsch flavoured score over a TER alignment: +1 per match, -1 per
// edit, normalised by the longer side and clamped to [0, 1]. Two empty
// segments score 1.
SimilarityScore similarity_from_script(const EditScript& script, std::size_t query_len,
                                       std::size_t source_len);

// The query is the hypothesis, the TM source the reference.
SimilarityScore similarity(const Segment& query, const Segment& tm_source);

}  // namespace tmw
