#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "tmw/similarity.hpp"

namespace tmw {
namespace {

double sim(const std::string& q, const std::string& s) {
  return similarity(make_segment("q", "", q), make_segment("s", "", s)).value;
}

TEST(Similarity, Identity) { EXPECT_EQ(sim("a b c d", "a b c d"), 1.0); }

TEST(Similarity, OneSubstitutionOutOfFour) {
  // (3 matches - 1 substitution) / 4
  EXPECT_DOUBLE_EQ(sim("a b c d", "a b c e"), (3.0 - 1.0) / 4.0);
}

TEST(Similarity, DisjointClampsToZero) { EXPECT_EQ(sim("a b c", "x y z"), 0.0); }

TEST(Similarity, BothEmptyIsOne) { EXPECT_EQ(sim("", ""), 1.0); }

TEST(Similarity, OneEmptySideIsZero) {
  EXPECT_EQ(sim("", "a b"), 0.0);
  EXPECT_EQ(sim("a b", ""), 0.0);
}

TEST(Similarity, NormalisesByLongerSide) {
  // q = a b, s = a b c: 2 matches, 1 insertion -> 1/3
  EXPECT_DOUBLE_EQ(sim("a b", "a b c"), 1.0 / 3.0);
  // shifted block: 3 matches, 1 shift -> 2/3
  EXPECT_DOUBLE_EQ(sim("c a b", "a b c"), 2.0 / 3.0);
}

TEST(Similarity, FromScriptFormula) {
  EditScript script;
  script.matches = 5;
  script.insertions = 1;
  script.deletions = 1;
  script.substitutions = 1;
  script.shifts = 1;
  EXPECT_DOUBLE_EQ(similarity_from_script(script, 7, 7).value, 1.0 / 7.0);
  script.matches = 1;
  EXPECT_EQ(similarity_from_script(script, 7, 7).value, 0.0);
}

TEST(Similarity, RangeAndSelfOnRandomPairs) {
  std::mt19937 rng(21);
  const auto vocab = testing::make_vocab(8);
  std::uniform_int_distribution<std::size_t> len(0, 15);
  for (int trial = 0; trial < 2000; ++trial) {
    const Segment q = make_segment("q", "", testing::random_sentence(rng, vocab, len(rng)));
    const Segment s = make_segment("s", "", testing::random_sentence(rng, vocab, len(rng)));
    const double v = similarity(q, s).value;
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
    ASSERT_EQ(similarity(q, q).value, 1.0);
  }
}

}  // namespace
}  // namespace tmw
