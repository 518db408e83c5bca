#include "tmw/text.hpp"

#include <cstdint>

namespace tmw {

namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_punct(unsigned char c) {
  return (c >= 0x21 && c <= 0x2f) || (c >= 0x3a && c <= 0x40) || (c >= 0x5b && c <= 0x60) ||
         (c >= 0x7b && c <= 0x7e);
}

char32_t lower_code_point(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  if (cp < 0x80) return cp;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  if (cp >= 0x100 && cp <= 0x137 && cp % 2 == 0) return cp + 1;
  if (cp >= 0x139 && cp <= 0x148 && cp % 2 == 1) return cp + 1;
  if (cp >= 0x14A && cp <= 0x177 && cp % 2 == 0) return cp + 1;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E && cp % 2 == 1) return cp + 1;
  if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 32;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 32;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Decodes one 2-byte sequence at text[i]; only 2-byte forms can change case in
// the ranges handled above, so longer sequences are copied verbatim.
bool decode_two_byte(std::string_view text, std::size_t i, char32_t& cp) {
  if (i + 1 >= text.size()) return false;
  const auto b0 = static_cast<unsigned char>(text[i]);
  const auto b1 = static_cast<unsigned char>(text[i + 1]);
  if ((b0 & 0xE0) != 0xC0 || (b1 & 0xC0) != 0x80 || b0 < 0xC2) return false;
  cp = (static_cast<char32_t>(b0 & 0x1F) << 6) | (b1 & 0x3F);
  return true;
}

}  // namespace

std::string to_lower_utf8(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c < 0x80) {
      out.push_back(static_cast<char>(lower_code_point(c)));
      ++i;
      continue;
    }
    char32_t cp = 0;
    if (decode_two_byte(text, i, cp)) {
      append_utf8(out, lower_code_point(cp));
      i += 2;
      continue;
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

std::vector<Token> tokenize(std::string_view raw, std::string_view /*lang*/) {
  std::vector<Token> tokens;
  auto emit = [&tokens](std::string_view surface) {
    Token t;
    t.surface = std::string(surface);
    t.norm = to_lower_utf8(surface);
    t.index = tokens.size();
    tokens.push_back(std::move(t));
  };

  std::size_t pos = 0;
  while (pos < raw.size()) {
    while (pos < raw.size() && is_space(static_cast<unsigned char>(raw[pos]))) ++pos;
    std::size_t end = pos;
    while (end < raw.size() && !is_space(static_cast<unsigned char>(raw[end]))) ++end;
    if (end == pos) break;

    std::string_view chunk = raw.substr(pos, end - pos);
    std::size_t lead = 0;
    while (lead < chunk.size() && is_punct(static_cast<unsigned char>(chunk[lead]))) ++lead;
    std::size_t trail = chunk.size();
    while (trail > lead && is_punct(static_cast<unsigned char>(chunk[trail - 1]))) --trail;

    for (std::size_t i = 0; i < lead; ++i) emit(chunk.substr(i, 1));
    if (trail > lead) emit(chunk.substr(lead, trail - lead));
    for (std::size_t i = trail; i < chunk.size(); ++i) emit(chunk.substr(i, 1));
    pos = end;
  }
  return tokens;
}

Segment make_segment(std::string id, std::string lang, std::string raw) {
  Segment s{std::move(id), std::move(lang), std::move(raw), {}};
  s.tokens = tokenize(s.raw, s.lang);
  return s;
}

std::vector<std::string> norms_of(const Segment& segment) {
  std::vector<std::string> out;
  out.reserve(segment.tokens.size());
  for (const auto& t : segment.tokens) out.push_back(t.norm);
  return out;
}

std::string join_surfaces(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t.surface;
  }
  return out;
}

}  // namespace tmw
