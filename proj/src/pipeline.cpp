#include "cws/pipeline.hpp"

#include <algorithm>

#include "cws/hull.hpp"

namespace cws {

HeapStream::HeapStream(const ReadOnlyArray& input, const CwHeap& base, std::size_t size,
                       Point first, Point last, bool reversed, std::size_t s,
                       WorkspaceBudget* budget)
    : base_(&base),
      size_(size),
      first_(first),
      last_(last),
      reversed_(reversed),
      intervals_(budget),
      back_(input, 0, input.size(), s, cws::reversed(base.order()),
            AlivePredicate::intervals(&intervals_), budget),
      scalars_(budget, 8) {}

void HeapStream::begin_round() {
  round_.emplace(base_->clone());
  forward_ = 0;
}

void HeapStream::enter_sub_block(std::size_t) {
  reread_.reset();
  reread_.emplace(round_->clone());
}

StreamItem HeapStream::next_forward() {
  const HeapKey k = *round_->extract();
  ++forward_;
  return {k.idx, k.p};
}

void HeapStream::activate(std::size_t begin, std::size_t end) {
  for (; forward_ < end; ++forward_) round_->extract();
  std::optional<HeapKey> anchor;
  for (std::size_t i = begin; i < end; ++i) {
    const HeapKey k = *reread_->extract();
    if (anchor) intervals_.extend(*anchor, k);
    else intervals_.open(k);
    anchor = anchor ? anchor : k;
    back_.insert(k.idx);
  }
  reread_.reset();
}

StreamItem HeapStream::step_back() {
  const HeapKey k = *back_.extract();
  return {k.idx, k.p};
}

void HeapStream::end_block() {
  intervals_.clear();
  back_.forget_all();
}

void HeapStream::end_round() {
  round_.reset();
  reread_.reset();
}

void reject_collinear(const ReadOnlyArray& input) {
  const std::size_t n = input.size();
  if (n < 3) return;
  const Point a = input[0];
  std::optional<Point> b;
  for (std::size_t i = 1; i < n; ++i) {
    const Point q = input[i];
    if (!b) {
      if (!(q == a)) b = q;
    } else if (orient(a, *b, q) != 0) {
      return;
    }
  }
  throw Error(ErrorKind::degenerate_input, "all points are collinear");
}

namespace {

void emit_in_memory(const mvector<StreamItem>& items, bool chain, OutputSink& sink) {
  if (chain)
    for (std::size_t i = 0; i + 1 < items.size(); ++i)
      sink.edge(items[i].index, items[i + 1].index);
  triangulate_mountain_in_memory(items, sink);
}

// The nested rounds need a branching factor of at least two.
std::size_t rounds_s(std::size_t s) { return std::max<std::size_t>(s, 2); }

}  // namespace

void triangulate_sorted(const ReadOnlyArray& input, const TriangulateOptions& opt,
                        WorkspaceBudget* budget, OutputSink& sink) {
  reject_collinear(input);
  const std::size_t s = std::max<std::size_t>(opt.s, 1);
  HullCursor hull(input, s, budget, {.include_collinear = true, .sorted_input = true});
  mvector<StreamItem> items{Metered<StreamItem>(budget)};
  WorkspaceGrant regs(budget, 8);
  while (auto e = hull.next()) {
    const bool upper = hull.upper_phase();
    const std::size_t lo = std::min(e->from, e->to), hi = std::max(e->from, e->to);
    if (hi == lo + 1) {
      if (upper) sink.edge(lo, hi);
      continue;
    }
    const std::size_t k = hi - lo + 1;
    if (opt.on_face) opt.on_face(e->from, e->to, k, upper);
    sink.edge(lo, hi);
    if (k <= s) {
      items.clear();
      Point prev{};
      for (std::size_t i = lo; i <= hi; ++i) {
        const Point p = input[i];
        if (i > lo && !key_less({prev, 0}, {p, 0}))
          throw Error(ErrorKind::not_sorted, "input is not sorted");
        prev = p;
        items.push_back({static_cast<std::uint32_t>(i), p});
      }
      emit_in_memory(items, upper, sink);
      items.clear();
      items.shrink_to_fit();
    } else {
      if (upper)
        for (std::size_t i = lo; i < hi; ++i) sink.edge(i, i + 1);
      triangulate_mountain(input, lo, k, rounds_s(s), budget, sink);
    }
  }
}

namespace {

class GeneralPass {
 public:
  GeneralPass(const ReadOnlyArray& input, std::size_t s, bool upper, const FaceFn& on_face,
              WorkspaceBudget* budget, OutputSink& sink)
      : input_(input),
        s_(s),
        upper_(upper),
        on_face_(on_face),
        budget_(budget),
        sink_(sink),
        order_(upper ? HeapOrder::ascending : HeapOrder::descending),
        h1_(input, 0, input.size(), s, order_, AlivePredicate::window(std::nullopt, std::nullopt),
            budget),
        h2_(h1_.clone()) {}

  void edge(const HullEdge& e) {
    std::size_t k = 0;
    while (h1_.top()->idx != e.to) {
      h1_.extract();
      ++k;
    }
    if (k == 1) {
      if (upper_) sink_.edge(e.from, e.to);
      h2_.extract();
      return;
    }
    if (on_face_) on_face_(e.from, e.to, k + 1, upper_);
    sink_.edge(e.from, e.to);
    // Mountains are processed left to right in both passes, so height ties
    // break the same way as in the sorted variant.
    if (k + 1 <= s_) {
      mvector<StreamItem> items{Metered<StreamItem>(budget_)};
      items.reserve(k + 1);
      for (std::size_t i = 0; i < k; ++i) {
        const HeapKey x = *h2_.extract();
        items.push_back({x.idx, x.p});
      }
      items.push_back({h2_.top()->idx, h2_.top()->p});
      if (!upper_) std::reverse(items.begin(), items.end());
      emit_in_memory(items, upper_, sink_);
      return;
    }
    const HeapKey p = *h2_.top();
    const HeapKey q = *h1_.top();
    const HeapKey& left = upper_ ? p : q;
    const HeapKey& right = upper_ ? q : p;
    const PairFn emit = diagonal_emitter(k + 1, sink_);
    {
      HeapStream trailing(input_, h2_, k + 1, left.p, right.p, !upper_, s_, budget_);
      nearest_smaller_pairs(trailing, rounds_s(s_), budget_, emit);
    }
    {
      CwHeap window(input_, 0, input_.size(), s_, reversed(order_),
                    AlivePredicate::window(KeyBound{left, false}, KeyBound{right, false}),
                    budget_);
      HeapStream opposite(input_, window, k + 1, left.p, right.p, upper_, s_, budget_);
      nearest_smaller_pairs(opposite, rounds_s(s_), budget_, emit);
    }
    std::optional<HeapKey> prev;
    for (std::size_t i = 0; i < k; ++i) {
      const HeapKey x = *h2_.extract();
      if (upper_ && prev) sink_.edge(prev->idx, x.idx);
      prev = x;
    }
    if (upper_) sink_.edge(prev->idx, q.idx);
  }

 private:
  const ReadOnlyArray& input_;
  std::size_t s_;
  bool upper_;
  const FaceFn& on_face_;
  WorkspaceBudget* budget_;
  OutputSink& sink_;
  HeapOrder order_;
  CwHeap h1_;  // runs ahead to the far end of the current hull edge
  CwHeap h2_;  // trails at the near end
};

}  // namespace

void triangulate_general(const ReadOnlyArray& input, const TriangulateOptions& opt,
                         WorkspaceBudget* budget, OutputSink& sink) {
  reject_collinear(input);
  const std::size_t s = std::max<std::size_t>(opt.s, 1);
  HullCursor hull(input, s, budget, {.include_collinear = true, .sorted_input = false});
  auto e = hull.next();
  {
    GeneralPass upper(input, s, true, opt.on_face, budget, sink);
    for (; e && hull.upper_phase(); e = hull.next()) upper.edge(*e);
  }
  GeneralPass lower(input, s, false, opt.on_face, budget, sink);
  for (; e; e = hull.next()) lower.edge(*e);
}

}  // namespace cws
