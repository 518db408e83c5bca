#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace tmw {

// Where the text a translator started from came from.
enum class Origin { TM, MT, APE, Scratch };

inline constexpr Origin kAllOrigins[] = {Origin::TM, Origin::MT, Origin::APE, Origin::Scratch};

// "TM", "MT", "APE", "SCRATCH"
std::string_view to_string(Origin origin);

// Accepts the canonical names case-insensitively, plus "none" for Scratch.
std::optional<Origin> parse_origin(std::string_view text);

}  // namespace tmw
