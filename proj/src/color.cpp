#include "tmw/color.hpp"

#include <algorithm>

#include "tmw/errors.hpp"

namespace tmw {

char color_code(Color c) { return c == Color::Green ? 'G' : 'R'; }

std::vector<TokenLabel> label_source(const Segment& query, const Segment& tm_source,
                                     const EditScript& script) {
  const std::size_t n = tm_source.tokens.size();
  std::vector<TokenLabel> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = {i, Color::Red};
  for (const auto& op : script.ops) {
    if (op.ref_index && *op.ref_index >= n) {
      throw InvalidInput("edit script references TM source token " + std::to_string(*op.ref_index) +
                         " of " + std::to_string(n));
    }
    if (op.hyp_index && *op.hyp_index >= query.tokens.size()) {
      throw InvalidInput("edit script references query token " + std::to_string(*op.hyp_index) +
                         " of " + std::to_string(query.tokens.size()));
    }
    if (op.kind == EditKind::Match) labels[*op.ref_index].color = Color::Green;
  }
  return labels;
}

std::vector<TokenLabel> project_to_target(const std::vector<TokenLabel>& source_labels,
                                          const TmEntry& entry) {
  const std::size_t src_n = entry.source.tokens.size();
  const std::size_t tgt_n = entry.target.tokens.size();
  if (source_labels.size() != src_n) {
    throw InvalidInput("source labels cover " + std::to_string(source_labels.size()) + " tokens, entry has " +
                       std::to_string(src_n));
  }
  std::vector<Color> source_color(src_n, Color::Red);
  for (const auto& l : source_labels) {
    if (l.index >= src_n) throw InvalidInput("source label index out of range");
    source_color[l.index] = l.color;
  }

  const Alignment fallback = entry.alignment.empty() ? diagonal_alignment(src_n, tgt_n) : Alignment{};
  const Alignment& links = entry.alignment.empty() ? fallback : entry.alignment;

  std::vector<bool> linked(tgt_n, false);
  std::vector<bool> all_green(tgt_n, true);
  for (const auto& link : links) {
    if (link.target >= tgt_n || link.source >= src_n) continue;
    linked[link.target] = true;
    if (source_color[link.source] != Color::Green) all_green[link.target] = false;
  }

  std::vector<TokenLabel> out(tgt_n);
  for (std::size_t j = 0; j < tgt_n; ++j) {
    out[j] = {j, linked[j] && all_green[j] ? Color::Green : Color::Red};
  }
  return out;
}

std::vector<Span> merge_spans(std::vector<TokenLabel> labels) {
  std::sort(labels.begin(), labels.end(),
            [](const TokenLabel& a, const TokenLabel& b) { return a.index < b.index; });
  std::vector<Span> spans;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].index != i) {
      if (labels[i].index < i) throw InvalidInput("duplicate label for token " + std::to_string(labels[i].index));
      throw InvalidInput("no label for token " + std::to_string(i));
    }
    if (!spans.empty() && spans.back().color == labels[i].color) {
      spans.back().end = i + 1;
    } else {
      spans.push_back({i, i + 1, labels[i].color});
    }
  }
  return spans;
}

std::vector<TokenLabel> expand_spans(const std::vector<Span>& spans) {
  std::vector<TokenLabel> out;
  for (const auto& s : spans) {
    for (std::size_t i = s.start; i < s.end; ++i) out.push_back({i, s.color});
  }
  return out;
}

ColoredSuggestion color_suggestion(const Segment& query, const TmEntry& entry,
                                   const RankedCandidate& candidate) {
  ColoredSuggestion out;
  out.entry_id = entry.id;
  out.source_labels = label_source(query, entry.source, ter_align(query, entry.source));
  out.target_labels = project_to_target(out.source_labels, entry);
  out.sim = candidate.sim.value_or(similarity(query, entry.source));
  out.ir_score = candidate.ir_score;
  out.green_target_count = static_cast<std::size_t>(std::count_if(
      out.target_labels.begin(), out.target_labels.end(),
      [](const TokenLabel& l) { return l.color == Color::Green; }));
  return out;
}

}  // namespace tmw
