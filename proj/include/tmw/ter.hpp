#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmw/text.hpp"

namespace tmw {

enum class EditKind { Match, Substitute, Insert, Delete, Shift };

const char* to_string(EditKind kind);

// A block of `length` hypothesis tokens starting at `start` is cut out and
// re-inserted so that it begins at `destination` in the sequence that remains
// after the cut. Positions refer to the hypothesis as it stood when the shift
// was applied (earlier shifts already performed).
struct ShiftSpan {
  std::size_t start = 0;
  std::size_t length = 0;
  std::size_t destination = 0;

  bool operator==(const ShiftSpan&) const = default;
};

struct EditOp {
  EditKind kind = EditKind::Match;
  std::optional<std::size_t> hyp_index;  // original (unshifted) hypothesis position
  std::optional<std::size_t> ref_index;
  std::optional<ShiftSpan> shift;

  bool operator==(const EditOp&) const = default;
};

// Shift ops come first, in application order, followed by the word-level
// alignment of the shifted hypothesis against the reference.
struct EditScript {
  std::vector<EditOp> ops;
  std::size_t matches = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t substitutions = 0;
  std::size_t shifts = 0;

  std::size_t edits() const { return insertions + deletions + substitutions + shifts; }

  bool operator==(const EditScript&) const = default;
};

inline constexpr std::size_t kMaxShifts = 10;
inline constexpr std::size_t kMaxShiftBlock = 10;
inline constexpr std::size_t kMaxShiftDistance = 50;

// Word-level TER alignment turning `hyp` into `ref`. Every edit costs 1.
EditScript ter_align(std::span<const std::string> hyp, std::span<const std::string> ref);
EditScript ter_align(const Segment& hyp, const Segment& ref);

// Plain Levenshtein cost over token ids, no shifts.
std::size_t word_edit_distance(std::span<const int> hyp, std::span<const int> ref);

}  // namespace tmw
