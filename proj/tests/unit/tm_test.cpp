#include <gtest/gtest.h>

#include "tmw/errors.hpp"
#include "tmw/tm.hpp"

namespace tmw {
namespace {

TEST(ParseTmFile, WellFormedLines) {
  const auto r = parse_tm_file("a b\tx y\t0-0 1-1\nc\tz\n# comment\n\nd e\tw\t\n", "en", "de");
  ASSERT_EQ(r.entries.size(), 3u);
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_EQ(r.entries[0].alignment, (Alignment{{0, 0}, {1, 1}}));
  EXPECT_TRUE(r.entries[1].alignment.empty());
  EXPECT_EQ(r.entries[0].source.lang, "en");
  EXPECT_EQ(r.entries[0].target.lang, "de");
  EXPECT_EQ(r.entries[0].id, entry_id_for("a b", "x y"));
}

TEST(ParseTmFile, BadAlignmentKeepsEntry) {
  const auto r = parse_tm_file("a b\tx y\tx-y\n", "en", "de");
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_TRUE(r.entries[0].alignment.empty());
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].line, 1u);
}

TEST(ParseTmFile, OutOfRangeAlignmentKeepsEntry) {
  const auto r = parse_tm_file("a b\tx y\t0-0 5-1\n", "en", "de");
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_TRUE(r.entries[0].alignment.empty());
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(ParseTmFile, MissingTargetIsSkipped) {
  const auto r = parse_tm_file("one\ttwo\nonly source\nthree\tfour\n", "en", "de");
  EXPECT_EQ(r.entries.size(), 2u);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].line, 2u);
}

TEST(ParseTmFile, RepeatedLineDropped) {
  const auto r = parse_tm_file("a\tb\na\tb\r\n", "en", "de");
  EXPECT_EQ(r.entries.size(), 1u);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].line, 2u);
}

TEST(ParseTmFile, EmptyFile) {
  const auto r = parse_tm_file("", "en", "de");
  EXPECT_TRUE(r.entries.empty());
  EXPECT_TRUE(r.warnings.empty());
}

TEST(MakeEntry, RejectsOutOfRangeLink) {
  EXPECT_THROW(make_entry("e", make_segment("s", "", "a"), make_segment("t", "", "b"), {{0, 1}}), InvalidInput);
}

TEST(MakeEntry, SortsAndDeduplicatesLinks) {
  const auto e = make_entry("e", make_segment("s", "", "a b"), make_segment("t", "", "x y"), {{1, 1}, {0, 0}, {1, 1}});
  EXPECT_EQ(e.alignment, (Alignment{{0, 0}, {1, 1}}));
}

TEST(DiagonalAlignment, RoundHalfUpAndClamp) {
  EXPECT_EQ(diagonal_alignment(2, 2), (Alignment{{0, 0}, {1, 1}}));
  // S=3, T=2: j=1 -> round(1.5) = 2
  EXPECT_EQ(diagonal_alignment(3, 2), (Alignment{{0, 0}, {2, 1}}));
  // S=2, T=3: j=1 -> round(0.667)=1, j=2 -> round(1.333)=1
  EXPECT_EQ(diagonal_alignment(2, 3), (Alignment{{0, 0}, {1, 1}, {1, 2}}));
  // S=1, T=2: j=1 -> round(0.5) = 1, clamped to 0
  EXPECT_EQ(diagonal_alignment(1, 2), (Alignment{{0, 0}, {0, 1}}));
  EXPECT_TRUE(diagonal_alignment(0, 3).empty());
}

TEST(DiagonalAlignment, EveryTargetLinkedOnceInRange) {
  for (std::size_t s = 1; s < 20; ++s) {
    for (std::size_t t = 1; t < 20; ++t) {
      const auto a = diagonal_alignment(s, t);
      ASSERT_EQ(a.size(), t);
      std::vector<int> seen(t, 0);
      for (const auto& l : a) {
        ASSERT_LT(l.source, s);
        ++seen[l.target];
      }
      for (const int c : seen) ASSERT_EQ(c, 1);
    }
  }
}

TEST(FormatAlignment, RoundTripsThroughParser) {
  const Alignment a{{0, 1}, {1, 0}, {2, 2}};
  const auto r = parse_tm_file("a b c\tx y z\t" + format_alignment(a) + "\n", "en", "de");
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_EQ(r.entries[0].alignment, a);
}

}  // namespace
}  // namespace tmw
