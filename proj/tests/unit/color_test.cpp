#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "tmw/color.hpp"
#include "tmw/errors.hpp"

namespace tmw {
namespace {

std::string colors(const std::vector<TokenLabel>& labels) {
  std::string out;
  for (const auto& l : labels) out.push_back(color_code(l.color));
  return out;
}

std::vector<TokenLabel> labels_from(const std::string& code) {
  std::vector<TokenLabel> out;
  for (std::size_t i = 0; i < code.size(); ++i) out.push_back({i, code[i] == 'G' ? Color::Green : Color::Red});
  return out;
}

std::vector<TokenLabel> label(const std::string& q, const std::string& s) {
  const Segment query = make_segment("q", "", q);
  const Segment source = make_segment("s", "", s);
  return label_source(query, source, ter_align(query, source));
}

TEST(LabelSource, Identity) { EXPECT_EQ(colors(label("a b c", "a b c")), "GGG"); }

TEST(LabelSource, Substitution) { EXPECT_EQ(colors(label("a b c", "a x c")), "GRG"); }

TEST(LabelSource, Disjoint) { EXPECT_EQ(colors(label("a b c", "x y")), "RR"); }

TEST(LabelSource, ShiftedBlockIsGreen) { EXPECT_EQ(colors(label("c a b", "a b c")), "GGG"); }

TEST(LabelSource, RejectsForeignScript) {
  const Segment query = make_segment("q", "", "a b c d");
  const Segment source = make_segment("s", "", "a b c d");
  const Segment short_source = make_segment("s", "", "a");
  EXPECT_THROW(label_source(query, short_source, ter_align(query, source)), InvalidInput);
}

TmEntry entry_with(const std::string& src, const std::string& tgt, Alignment a) {
  return make_entry("e", make_segment("s", "", src), make_segment("t", "", tgt), std::move(a));
}

TEST(ProjectToTarget, FullPropagation) {
  const auto e = entry_with("a b c", "x y z", {{0, 0}, {1, 1}, {2, 2}});
  EXPECT_EQ(colors(project_to_target(labels_from("GGG"), e)), "GGG");
  EXPECT_EQ(colors(project_to_target(labels_from("RRR"), e)), "RRR");
}

TEST(ProjectToTarget, AllLinkedSourcesMustBeGreen) {
  // target 0 <- {0,2}, target 1 <- {0,1}, target 2 unaligned
  const auto e = entry_with("a b c", "x y z", {{0, 0}, {2, 0}, {0, 1}, {1, 1}});
  EXPECT_EQ(colors(project_to_target(labels_from("GRG"), e)), "GRR");
}

TEST(ProjectToTarget, DiagonalFallback) {
  // S=2, T=3 -> links 0-0 1-1 1-2
  const auto e = entry_with("a b", "x y z", {});
  EXPECT_EQ(colors(project_to_target(labels_from("GR"), e)), "GRR");
  EXPECT_EQ(colors(project_to_target(labels_from("RG"), e)), "RGG");
}

TEST(ProjectToTarget, RejectsWrongCoverage) {
  const auto e = entry_with("a b", "x y", {});
  EXPECT_THROW(project_to_target(labels_from("G"), e), InvalidInput);
}

// Exhaustive check of the projection predicate and of monotonicity on small
// entries with every alignment and every source colouring.
TEST(ProjectToTarget, ExhaustiveSmallEntries) {
  const std::size_t S = 3, T = 2;
  const std::size_t links = S * T;
  for (unsigned mask = 1; mask < (1u << links); ++mask) {
    Alignment a;
    for (std::size_t k = 0; k < links; ++k) {
      if (mask & (1u << k)) a.push_back({k / T, k % T});
    }
    const auto e = entry_with("a b c", "x y", a);
    for (unsigned colour = 0; colour < (1u << S); ++colour) {
      std::string code;
      for (std::size_t i = 0; i < S; ++i) code.push_back(colour & (1u << i) ? 'G' : 'R');
      const auto target = project_to_target(labels_from(code), e);
      for (std::size_t j = 0; j < T; ++j) {
        bool any = false, all = true;
        for (std::size_t i = 0; i < S; ++i) {
          if (mask & (1u << (i * T + j))) {
            any = true;
            all = all && code[i] == 'G';
          }
        }
        ASSERT_EQ(target[j].color == Color::Green, any && all);
      }
      // flipping a Red source to Green never turns a Green target Red
      for (std::size_t i = 0; i < S; ++i) {
        if (code[i] == 'G') continue;
        std::string flipped = code;
        flipped[i] = 'G';
        const auto after = project_to_target(labels_from(flipped), e);
        for (std::size_t j = 0; j < T; ++j) {
          if (target[j].color == Color::Green) ASSERT_EQ(after[j].color, Color::Green);
        }
      }
    }
  }
}

TEST(MergeSpans, RunLength) {
  EXPECT_EQ(merge_spans(labels_from("GGRG")),
            (std::vector<Span>{{0, 2, Color::Green}, {2, 3, Color::Red}, {3, 4, Color::Green}}));
  EXPECT_EQ(merge_spans(labels_from("GGGGG")), (std::vector<Span>{{0, 5, Color::Green}}));
  EXPECT_TRUE(merge_spans({}).empty());
}

TEST(MergeSpans, RejectsGapsAndDuplicates) {
  EXPECT_THROW(merge_spans({{0, Color::Green}, {2, Color::Green}}), InvalidInput);
  EXPECT_THROW(merge_spans({{0, Color::Green}, {0, Color::Red}, {1, Color::Red}}), InvalidInput);
  EXPECT_THROW(merge_spans({{1, Color::Green}}), InvalidInput);
}

TEST(MergeSpans, AcceptsAnyOrder) {
  EXPECT_EQ(merge_spans({{1, Color::Red}, {0, Color::Green}}),
            (std::vector<Span>{{0, 1, Color::Green}, {1, 2, Color::Red}}));
}

TEST(MergeSpans, ExpandRoundTrip) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    std::string code;
    for (int i = trial % 17; i > 0; --i) code.push_back(rng() % 2 ? 'G' : 'R');
    const auto labels = labels_from(code);
    const auto spans = merge_spans(labels);
    ASSERT_EQ(expand_spans(spans), labels);
    for (std::size_t i = 1; i < spans.size(); ++i) ASSERT_NE(spans[i - 1].color, spans[i].color);
  }
}

TEST(ColorSuggestion, GreenTargetCount) {
  const auto e = entry_with("the red house", "das rote Haus", {{0, 0}, {1, 1}, {2, 2}});
  const Segment q = make_segment("q", "", "the blue house");
  const auto s = color_suggestion(q, e, RankedCandidate{"e", 0.5, std::nullopt, false});
  EXPECT_EQ(colors(s.source_labels), "GRG");
  EXPECT_EQ(colors(s.target_labels), "GRG");
  EXPECT_EQ(s.green_target_count, 2u);
  EXPECT_DOUBLE_EQ(s.sim.value, 1.0 / 3.0);
  EXPECT_EQ(s.ir_score, 0.5);
}

}  // namespace
}  // namespace tmw
