#include "tmw/ter.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <unordered_map>

namespace tmw {

namespace {

enum class Step : unsigned char { Match, Sub, Ins, Del };

using Seq = std::vector<int>;

struct Path {
  std::size_t cost = 0;
  std::vector<Step> steps;
};

// Full DP with traceback. Diagonal moves win ties, then deletion of a
// hypothesis token, then insertion of a reference token.
Path align_path(std::span<const int> hyp, std::span<const int> ref) {
  const std::size_t n = hyp.size();
  const std::size_t m = ref.size();
  std::vector<std::size_t> cost((n + 1) * (m + 1));
  auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
  for (std::size_t i = 0; i <= n; ++i) cost[at(i, 0)] = i;
  for (std::size_t j = 0; j <= m; ++j) cost[at(0, j)] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = cost[at(i - 1, j - 1)] + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
      cost[at(i, j)] = std::min({diag, cost[at(i - 1, j)] + 1, cost[at(i, j - 1)] + 1});
    }
  }

  Path path;
  path.cost = cost[at(n, m)];
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = hyp[i - 1] == ref[j - 1];
      if (cost[at(i, j)] == cost[at(i - 1, j - 1)] + (same ? 0 : 1)) {
        path.steps.push_back(same ? Step::Match : Step::Sub);
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && cost[at(i, j)] == cost[at(i - 1, j)] + 1) {
      path.steps.push_back(Step::Del);
      --i;
    } else {
      path.steps.push_back(Step::Ins);
      --j;
    }
  }
  std::reverse(path.steps.begin(), path.steps.end());
  return path;
}

// Reference side of the distance computation: the bit-vector recurrence,
// one 64-bit word per 64 reference tokens, one column per hypothesis token.
class Reference {
 public:
  Reference(Seq ids, std::size_t vocab_size) : ids_(std::move(ids)) {
    blocks_ = (ids_.size() + 63) / 64;
    peq_.assign(vocab_size * blocks_, 0);
    for (std::size_t j = 0; j < ids_.size(); ++j) {
      peq_[static_cast<std::size_t>(ids_[j]) * blocks_ + j / 64] |= std::uint64_t{1} << (j % 64);
    }
  }

  std::span<const int> ids() const { return ids_; }

  std::size_t blocks() const { return blocks_; }

  std::size_t distance(std::span<const int> hyp) const {
    if (ids_.empty()) return hyp.size();
    thread_local std::vector<std::uint64_t> pv, mv;
    pv.assign(blocks_, ~std::uint64_t{0});
    mv.assign(blocks_, 0);
    return run(hyp, pv.data(), mv.data(), ids_.size());
  }

  // Column states after each prefix of one hypothesis, so candidates sharing
  // that prefix resume instead of starting over.
  class Prefixes {
   public:
    Prefixes(const Reference& ref, std::span<const int> hyp) : ref_(ref), blocks_(ref.blocks_) {
      pv_.assign((hyp.size() + 1) * blocks_, ~std::uint64_t{0});
      mv_.assign((hyp.size() + 1) * blocks_, 0);
      score_.assign(hyp.size() + 1, ref.ids_.size());
      for (std::size_t i = 0; i < hyp.size() && blocks_; ++i) {
        std::copy_n(&pv_[i * blocks_], blocks_, &pv_[(i + 1) * blocks_]);
        std::copy_n(&mv_[i * blocks_], blocks_, &mv_[(i + 1) * blocks_]);
        score_[i + 1] = ref.run(hyp.subspan(i, 1), &pv_[(i + 1) * blocks_], &mv_[(i + 1) * blocks_], score_[i]);
      }
    }

    // `hyp` must agree with the original on its first `shared` tokens.
    std::size_t distance(std::span<const int> hyp, std::size_t shared) const {
      if (!blocks_) return hyp.size();
      thread_local std::vector<std::uint64_t> pv, mv;
      pv.assign(&pv_[shared * blocks_], &pv_[(shared + 1) * blocks_]);
      mv.assign(&mv_[shared * blocks_], &mv_[(shared + 1) * blocks_]);
      return ref_.run(hyp.subspan(shared), pv.data(), mv.data(), score_[shared]);
    }

   private:
    const Reference& ref_;
    std::size_t blocks_;
    std::vector<std::uint64_t> pv_, mv_;
    std::vector<std::size_t> score_;
  };

 private:
  std::size_t run(std::span<const int> hyp, std::uint64_t* pv, std::uint64_t* mv, std::size_t score) const {
    const std::uint64_t high = std::uint64_t{1} << ((ids_.size() - 1) % 64);
    for (const int t : hyp) {
      const std::uint64_t* eqs = &peq_[static_cast<std::size_t>(t) * blocks_];
      int h = 1;  // top row grows by one per column
      for (std::size_t b = 0; b < blocks_; ++b) {
        std::uint64_t eq = eqs[b];
        const std::uint64_t xv = eq | mv[b];
        if (h < 0) eq |= 1;
        const std::uint64_t xh = (((eq & pv[b]) + pv[b]) ^ pv[b]) | eq;
        std::uint64_t ph = mv[b] | ~(xh | pv[b]);
        std::uint64_t mh = pv[b] & xh;
        const std::uint64_t top = b + 1 == blocks_ ? high : std::uint64_t{1} << 63;
        const int out = (ph & top) ? 1 : (mh & top) ? -1 : 0;
        ph <<= 1;
        mh <<= 1;
        if (h < 0) {
          mh |= 1;
        } else if (h > 0) {
          ph |= 1;
        }
        pv[b] = mh | ~(xv | ph);
        mv[b] = ph & xv;
        h = out;
      }
      score = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(score) + h);
    }
    return score;
  }

  Seq ids_;
  std::size_t blocks_ = 0;
  std::vector<std::uint64_t> peq_;
};

// Cuts block [start, start+length) and re-inserts it at `destination` of the
// remainder.
template <typename T>
std::vector<T> apply_shift(const std::vector<T>& in, const ShiftSpan& s) {
  const auto at = [&in](std::size_t k) { return in.begin() + static_cast<std::ptrdiff_t>(k); };
  std::vector<T> out;
  out.reserve(in.size());
  if (s.destination < s.start) {
    out.insert(out.end(), in.begin(), at(s.destination));
    out.insert(out.end(), at(s.start), at(s.start + s.length));
    out.insert(out.end(), at(s.destination), at(s.start));
    out.insert(out.end(), at(s.start + s.length), in.end());
  } else {
    const std::size_t tail = s.destination + s.length;
    out.insert(out.end(), in.begin(), at(s.start));
    out.insert(out.end(), at(s.start + s.length), at(tail));
    out.insert(out.end(), at(s.start), at(s.start + s.length));
    out.insert(out.end(), at(tail), in.end());
  }
  return out;
}

struct Candidate {
  ShiftSpan span;
  std::size_t cost = 0;
};

// Hypotheses up to this length try every landing point; longer ones only
// move blocks that are not already matched, to where the block sits in the
// reference.
inline constexpr std::size_t kExhaustiveShiftLength = 16;

// For each hypothesis position, whether the current alignment matches it; for
// each reference position, the hypothesis position it lines up with.
struct Landmarks {
  std::vector<bool> matched;
  std::vector<std::size_t> ref_to_hyp;  // size |ref| + 1
};

Landmarks landmarks(const Seq& cur, std::span<const int> ref) {
  const Path path = align_path(cur, ref);
  Landmarks out{std::vector<bool>(cur.size(), false), std::vector<std::size_t>(ref.size() + 1, cur.size())};
  std::size_t i = 0;
  std::size_t j = 0;
  for (const Step step : path.steps) {
    if (step == Step::Del) {
      ++i;
      continue;
    }
    out.ref_to_hyp[j++] = i;
    if (step == Step::Ins) continue;
    if (step == Step::Match) out.matched[i] = true;
    ++i;
  }
  return out;
}

// Every shift of a block (up to kMaxShiftBlock tokens) that occurs verbatim in
// the reference, within kMaxShiftDistance.
std::vector<Candidate> candidate_shifts(const Seq& cur, const Reference& ref) {
  const std::size_t n = cur.size();
  const auto r = ref.ids();
  const Reference::Prefixes prefixes(ref, cur);
  const bool exhaustive = n <= kExhaustiveShiftLength;
  const Landmarks marks = exhaustive ? Landmarks{} : landmarks(cur, r);
  std::vector<Candidate> out;
  std::vector<std::size_t> dests;
  Seq shifted;
  for (std::size_t start = 0; start < n; ++start) {
    for (std::size_t len = 1; len <= kMaxShiftBlock && start + len <= n; ++len) {
      const auto first = cur.begin() + static_cast<std::ptrdiff_t>(start);
      const auto last = first + static_cast<std::ptrdiff_t>(len);
      auto hit = std::search(r.begin(), r.end(), first, last);
      if (hit == r.end()) break;
      const std::size_t lo = start > kMaxShiftDistance ? start - kMaxShiftDistance : 0;
      const std::size_t hi = std::min(n - len, start + kMaxShiftDistance);
      dests.clear();
      if (exhaustive) {
        for (std::size_t dest = lo; dest <= hi; ++dest) dests.push_back(dest);
      } else {
        if (std::all_of(marks.matched.begin() + static_cast<std::ptrdiff_t>(start),
                        marks.matched.begin() + static_cast<std::ptrdiff_t>(start + len),
                        [](bool m) { return m; })) {
          continue;
        }
        for (; hit != r.end(); hit = std::search(hit + 1, r.end(), first, last)) {
          const std::size_t p = marks.ref_to_hyp[static_cast<std::size_t>(hit - r.begin())];
          // landing point in the sequence with the block cut out
          const std::size_t d = p > start ? (p >= start + len ? p - len : start) : p;
          for (const std::size_t c : {d == 0 ? d : d - 1, d, d + 1}) {
            if (c >= lo && c <= hi) dests.push_back(c);
          }
        }
        std::sort(dests.begin(), dests.end());
        dests.erase(std::unique(dests.begin(), dests.end()), dests.end());
      }
      for (const std::size_t dest : dests) {
        if (dest == start) continue;
        const ShiftSpan span{start, len, dest};
        shifted = apply_shift(cur, span);
        out.push_back(Candidate{span, prefixes.distance(shifted, std::min(start, dest))});
      }
    }
  }
  return out;
}

// First shifts carried into the two-shift lookahead, cheapest first. The
// width shrinks on long inputs so that roughly kLookaheadBudget second shifts
// are scored per step.
inline constexpr std::size_t kLookaheadWidth = 64;
inline constexpr std::size_t kLookaheadBudget = 1 << 17;

struct Move {
  std::vector<ShiftSpan> spans;
  std::size_t cost = 0;  // distance after the move
  std::size_t total() const { return spans.size() + cost; }
};

// Best one- or two-shift move. A move must lower the total (shifts + distance)
// below `cost`; a single shift wins ties, earlier enumeration wins among
// equals. The lookahead lets the search cross plateaus where no single shift
// pays for itself but a pair does.
std::optional<Move> best_move(const Seq& cur, const Reference& ref, std::size_t cost) {
  std::vector<Candidate> firsts = candidate_shifts(cur, ref);
  std::optional<Move> best;
  for (const auto& c : firsts) {
    if (1 + c.cost < (best ? best->total() : cost)) best = Move{{c.span}, c.cost};
  }
  if (cost < 3) return best;

  std::stable_sort(firsts.begin(), firsts.end(),
                   [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });
  const std::size_t width = std::clamp<std::size_t>(kLookaheadBudget / std::max<std::size_t>(firsts.size(), 1), 1,
                                                      kLookaheadWidth);
  if (firsts.size() > width) firsts.resize(width);
  for (const auto& first : firsts) {
    for (const auto& second : candidate_shifts(apply_shift(cur, first.span), ref)) {
      if (2 + second.cost < (best ? best->total() : cost)) {
        best = Move{{first.span, second.span}, second.cost};
      }
    }
  }
  return best;
}

EditScript build_script(const std::vector<ShiftSpan>& shifts, const std::vector<std::size_t>& origin,
                        const Path& path) {
  EditScript script;
  for (const auto& s : shifts) {
    EditOp op;
    op.kind = EditKind::Shift;
    op.shift = s;
    script.ops.push_back(op);
  }
  script.shifts = shifts.size();

  std::size_t i = 0;
  std::size_t j = 0;
  for (const Step step : path.steps) {
    EditOp op;
    switch (step) {
      case Step::Match:
        op.kind = EditKind::Match;
        op.hyp_index = origin[i++];
        op.ref_index = j++;
        ++script.matches;
        break;
      case Step::Sub:
        op.kind = EditKind::Substitute;
        op.hyp_index = origin[i++];
        op.ref_index = j++;
        ++script.substitutions;
        break;
      case Step::Del:
        op.kind = EditKind::Delete;
        op.hyp_index = origin[i++];
        ++script.deletions;
        break;
      case Step::Ins:
        op.kind = EditKind::Insert;
        op.ref_index = j++;
        ++script.insertions;
        break;
    }
    script.ops.push_back(op);
  }
  return script;
}

}  // namespace

const char* to_string(EditKind kind) {
  switch (kind) {
    case EditKind::Match: return "match";
    case EditKind::Substitute: return "substitute";
    case EditKind::Insert: return "insert";
    case EditKind::Delete: return "delete";
    case EditKind::Shift: return "shift";
  }
  return "?";
}

std::size_t word_edit_distance(std::span<const int> hyp, std::span<const int> ref) {
  int vocab = 0;
  for (const int t : hyp) vocab = std::max(vocab, t + 1);
  for (const int t : ref) vocab = std::max(vocab, t + 1);
  return Reference(Seq(ref.begin(), ref.end()), static_cast<std::size_t>(vocab)).distance(hyp);
}

EditScript ter_align(std::span<const std::string> hyp, std::span<const std::string> ref) {
  std::unordered_map<std::string_view, int> vocab;
  auto encode = [&vocab](std::span<const std::string> words) {
    Seq ids;
    ids.reserve(words.size());
    for (const auto& w : words) {
      auto [it, inserted] = vocab.try_emplace(w, static_cast<int>(vocab.size()));
      ids.push_back(it->second);
    }
    return ids;
  };
  Seq cur = encode(hyp);
  Seq ref_ids = encode(ref);
  const Reference reference(std::move(ref_ids), vocab.size());

  std::vector<std::size_t> origin(cur.size());
  std::iota(origin.begin(), origin.end(), std::size_t{0});

  std::vector<ShiftSpan> shifts;
  std::size_t cost = reference.distance(cur);
  while (shifts.size() < kMaxShifts && cost >= 2) {
    const auto move = best_move(cur, reference, cost);
    if (!move || shifts.size() + move->spans.size() > kMaxShifts) break;
    for (const auto& span : move->spans) {
      cur = apply_shift(cur, span);
      origin = apply_shift(origin, span);
      shifts.push_back(span);
    }
    cost = move->cost;
  }
  return build_script(shifts, origin, align_path(cur, reference.ids()));
}

EditScript ter_align(const Segment& hyp, const Segment& ref) {
  const auto h = norms_of(hyp);
  const auto r = norms_of(ref);
  return ter_align(std::span<const std::string>(h), std::span<const std::string>(r));
}

}  // namespace tmw
