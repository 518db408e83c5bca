#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tmw {

struct Token {
  std::string surface;
  std::string norm;  // lowercased surface
  std::size_t index = 0;

  bool operator==(const Token&) const = default;
};

struct Segment {
  std::string id;
  std::string lang;
  std::string raw;
  std::vector<Token> tokens;

  bool operator==(const Segment&) const = default;
};

// Lowercases UTF-8 text. Covers ASCII, Latin-1, Latin Extended-A, Greek and
// Cyrillic capitals; everything else (and malformed bytes) passes through.
std::string to_lower_utf8(std::string_view text);

// Splits on whitespace, then peels leading and trailing ASCII punctuation off
// each chunk as single-character tokens. Interior punctuation stays attached
// ("don't", "U.S").
std::vector<Token> tokenize(std::string_view raw, std::string_view lang = {});

Segment make_segment(std::string id, std::string lang, std::string raw);

std::vector<std::string> norms_of(const Segment& segment);

// Surfaces joined by single spaces.
std::string join_surfaces(const std::vector<Token>& tokens);

}  // namespace tmw
