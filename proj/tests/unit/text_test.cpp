#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "tmw/text.hpp"

namespace tmw {
namespace {

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

std::vector<std::string> norms(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.norm);
  return out;
}

TEST(Tokenize, DetachesPunctuation) {
  const auto tokens = tokenize("Hello, world");
  EXPECT_EQ(surfaces(tokens), (std::vector<std::string>{"Hello", ",", "world"}));
  EXPECT_EQ(norms(tokens), (std::vector<std::string>{"hello", ",", "world"}));
}

TEST(Tokenize, EmptyInput) {
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize("   \t\n ").empty());
}

TEST(Tokenize, CaseFoldingKeepsIndices) {
  const auto tokens = tokenize("A a A");
  ASSERT_EQ(tokens.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(tokens[i].norm, "a");
    EXPECT_EQ(tokens[i].index, i);
  }
}

TEST(Tokenize, LeadingAndTrailingRuns) {
  EXPECT_EQ(surfaces(tokenize("(\"quoted\").")),
            (std::vector<std::string>{"(", "\"", "quoted", "\"", ")", "."}));
  EXPECT_EQ(surfaces(tokenize("don't U.S. ...")),
            (std::vector<std::string>{"don't", "U.S", ".", ".", ".", "."}));
}

TEST(Tokenize, NonAsciiLowercase) {
  EXPECT_EQ(norms(tokenize("ÉCOLE Ελλάδα МОСКВА Łódź")),
            (std::vector<std::string>{"école", "ελλάδα", "москва", "łódź"}));
}

TEST(Tokenize, IdempotentUnderRejoin) {
  std::mt19937 rng(7);
  const std::vector<std::string> pieces = {"a", "B", ",", ".", "(x)", "it's", "Ünï", "\"q\"", "--", "é!"};
  for (int trial = 0; trial < 2000; ++trial) {
    std::string raw;
    std::uniform_int_distribution<int> len(0, 12), pick(0, static_cast<int>(pieces.size()) - 1), ws(0, 3);
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      raw += pieces[pick(rng)];
      raw += std::string(static_cast<std::size_t>(ws(rng)), ' ');
    }
    const auto once = tokenize(raw);
    const auto twice = tokenize(join_surfaces(once));
    ASSERT_EQ(once, twice) << "raw: [" << raw << "]";
  }
}

TEST(Segment, TokensMatchRaw) {
  const Segment s = make_segment("s1", "en", "The cat sat.");
  EXPECT_EQ(s.tokens, tokenize("The cat sat."));
  EXPECT_EQ(norms_of(s), (std::vector<std::string>{"the", "cat", "sat", "."}));
}

}  // namespace
}  // namespace tmw
