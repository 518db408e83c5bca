#include "tmw/similarity.hpp"

#include <algorithm>

namespace tmw {

SimilarityScore similarity_from_script(const EditScript& script, std::size_t query_len,
                                       std::size_t source_len) {
  const std::size_t longest = std::max(query_len, source_len);
  if (longest == 0) return {1.0};
  const double raw = (static_cast<double>(script.matches) - static_cast<double>(script.edits())) /
                     static_cast<double>(longest);
  return {std::clamp(raw, 0.0, 1.0)};
}

SimilarityScore similarity(const Segment& query, const Segment& tm_source) {
  return similarity_from_script(ter_align(query, tm_source), query.tokens.size(),
                                tm_source.tokens.size());
}

}  // namespace tmw
