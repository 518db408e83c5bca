#include "tmw/tm.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <set>

#include "tmw/errors.hpp"

namespace tmw {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

bool parse_index(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

TmEntry make_entry(std::string id, Segment source, Segment target, Alignment alignment) {
  std::sort(alignment.begin(), alignment.end());
  alignment.erase(std::unique(alignment.begin(), alignment.end()), alignment.end());
  for (const auto& link : alignment) {
    if (link.source >= source.tokens.size() || link.target >= target.tokens.size()) {
      throw InvalidInput("alignment link " + std::to_string(link.source) + "-" +
                         std::to_string(link.target) + " out of range for entry " + id);
    }
  }
  return TmEntry{std::move(id), std::move(source), std::move(target), std::move(alignment)};
}

Alignment diagonal_alignment(std::size_t source_len, std::size_t target_len) {
  Alignment out;
  if (source_len == 0 || target_len == 0) return out;
  out.reserve(target_len);
  for (std::size_t j = 0; j < target_len; ++j) {
    // round-half-up of j * S / T in integers
    const std::size_t s = (2 * j * source_len + target_len) / (2 * target_len);
    out.push_back({std::min(s, source_len - 1), j});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string entry_id_for(std::string_view source, std::string_view target) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::string_view s) {
    for (const char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
  };
  mix(source);
  mix("\t");
  mix(target);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id = "tm-";
  for (int shift = 60; shift >= 0; shift -= 4) id.push_back(kHex[(h >> shift) & 0xF]);
  return id;
}

TmParseResult parse_tm_file(std::string_view text, const std::string& source_lang,
                            const std::string& target_lang) {
  TmParseResult result;
  std::set<std::string> seen;
  const auto lines = split(text, '\n');
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string_view line = lines[n];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;
    const std::size_t lineno = n + 1;

    const auto fields = split(line, '\t');
    if (fields.size() < 2 || trim(fields[0]).empty() || trim(fields[1]).empty()) {
      result.warnings.push_back({lineno, "expected source<TAB>target"});
      continue;
    }
    if (fields.size() > 3) {
      result.warnings.push_back({lineno, "extra fields ignored"});
    }
    const std::string src(trim(fields[0]));
    const std::string tgt(trim(fields[1]));
    Segment source = make_segment(entry_id_for(src, tgt) + ":src", source_lang, src);
    Segment target = make_segment(entry_id_for(src, tgt) + ":tgt", target_lang, tgt);

    Alignment alignment;
    bool alignment_ok = true;
    if (fields.size() >= 3) {
      for (const auto tok : split(trim(fields[2]), ' ')) {
        if (tok.empty()) continue;
        const std::size_t dash = tok.find('-');
        AlignmentLink link;
        if (dash == std::string_view::npos || !parse_index(tok.substr(0, dash), link.source) ||
            !parse_index(tok.substr(dash + 1), link.target)) {
          result.warnings.push_back({lineno, "bad alignment token \"" + std::string(tok) + "\"; alignment dropped"});
          alignment_ok = false;
          break;
        }
        if (link.source >= source.tokens.size() || link.target >= target.tokens.size()) {
          result.warnings.push_back({lineno, "alignment link \"" + std::string(tok) + "\" out of range; alignment dropped"});
          alignment_ok = false;
          break;
        }
        alignment.push_back(link);
      }
    }
    if (!alignment_ok) alignment.clear();

    std::string id = entry_id_for(src, tgt);
    if (!seen.insert(id).second) {
      result.warnings.push_back({lineno, "duplicate of an earlier line (" + id + ")"});
      continue;
    }
    result.entries.push_back(make_entry(std::move(id), std::move(source), std::move(target), std::move(alignment)));
  }
  return result;
}

std::string format_alignment(const Alignment& alignment) {
  std::string out;
  for (const auto& link : alignment) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(link.source) + "-" + std::to_string(link.target);
  }
  return out;
}

}  // namespace tmw
