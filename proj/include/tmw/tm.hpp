#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tmw/text.hpp"

namespace tmw {

struct AlignmentLink {
  std::size_t source = 0;
  std::size_t target = 0;

  auto operator<=>(const AlignmentLink&) const = default;
};

// Sorted, duplicate-free.
using Alignment = std::vector<AlignmentLink>;

struct TmEntry {
  std::string id;
  Segment source;
  Segment target;
  Alignment alignment;  // may be empty

  bool operator==(const TmEntry&) const = default;
};

// Throws InvalidInput when a link points outside either segment.
TmEntry make_entry(std::string id, Segment source, Segment target, Alignment alignment = {});

// Target token j linked to source token round(j * |source| / |target|),
// clamped to the last source token. Empty when either side is empty.
Alignment diagonal_alignment(std::size_t source_len, std::size_t target_len);

// Stable content-derived id for uploaded entries ("tm-" + 16 hex digits).
std::string entry_id_for(std::string_view source, std::string_view target);

struct ParseWarning {
  std::size_t line = 0;  // 1-based
  std::string message;

  bool operator==(const ParseWarning&) const = default;
};

struct TmParseResult {
  std::vector<TmEntry> entries;
  std::vector<ParseWarning> warnings;
};

// Tab-separated TM upload: "source TAB target [TAB i-j i-j ...]" per line.
// Lines starting with '#' and blank lines are skipped. A line without a
// target is skipped with a warning; an unreadable or out-of-range alignment
// keeps the entry with an empty alignment and a warning. Repeated lines
// within one file are reported and dropped.
TmParseResult parse_tm_file(std::string_view text, const std::string& source_lang,
                            const std::string& target_lang);

// "0-0 1-2" style rendering, inverse of the upload field.
std::string format_alignment(const Alignment& alignment);

}  // namespace tmw
