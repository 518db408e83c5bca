#include "tmw/origin.hpp"

#include "tmw/text.hpp"

namespace tmw {

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::TM: return "TM";
    case Origin::MT: return "MT";
    case Origin::APE: return "APE";
    case Origin::Scratch: return "SCRATCH";
  }
  return "?";
}

std::optional<Origin> parse_origin(std::string_view text) {
  const std::string lower = to_lower_utf8(text);
  if (lower == "tm") return Origin::TM;
  if (lower == "mt") return Origin::MT;
  if (lower == "ape") return Origin::APE;
  if (lower == "scratch" || lower == "none") return Origin::Scratch;
  return std::nullopt;
}

}  // namespace tmw
