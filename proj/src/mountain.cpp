#include "cws/mountain.hpp"

#include <stdexcept>

namespace cws {

namespace {

struct HeightKey {
  i128 h = 0;
  std::size_t pos = 0;  // mountain position; smaller position is smaller on ties
};

bool height_less(const HeightKey& a, const HeightKey& b) {
  return a.h < b.h || (a.h == b.h && a.pos < b.pos);
}

// Doubled distance to the base line, normalized to be positive inside.
class Heights {
 public:
  Heights(Point first, Point last, std::size_t k) : first_(first), last_(last), k_(k) {}

  HeightKey operator()(const Point& q, std::size_t pos) {
    if (pos == 0 || pos + 1 == k_) return {0, pos};
    i128 h = orient_det(first_, last_, q);
    if (h == 0) throw Error(ErrorKind::not_a_mountain, "vertex on the base line");
    const int sg = h > 0 ? 1 : -1;
    if (side_ == 0) side_ = sg;
    if (sg != side_) throw Error(ErrorKind::not_a_mountain, "vertices on both sides of the base");
    return {h * side_, pos};
  }

 private:
  Point first_;
  Point last_;
  std::size_t k_;
  int side_ = 0;
};

struct Frame {
  std::size_t l;      // stream position of the current left candidate
  std::size_t begin;  // first stream position of its sub-block
  HeightKey key;
  std::uint32_t idx;
};

// Loop registers of one nearest-smaller run.
constexpr std::size_t kNsrScalarWords = 24;

}  // namespace

std::size_t nsr_rounds(std::size_t k, std::size_t s) {
  std::size_t r = 0;
  for (std::size_t span = 1; span < k; span *= s) ++r;
  return r;
}

ArrayStream::ArrayStream(const ReadOnlyArray& input, std::size_t offset, std::size_t length,
                         bool reversed, WorkspaceBudget* budget)
    : input_(&input),
      offset_(offset),
      length_(length),
      reversed_(reversed),
      active_(Metered<Active>(budget)),
      scalars_(budget, 12) {
  if (length_ > 0) {
    first_ = input[offset_];
    last_ = input[offset_ + length_ - 1];
  }
}

StreamItem ArrayStream::at(std::size_t pos) const {
  const std::size_t i = offset_ + (reversed_ ? length_ - 1 - pos : pos);
  return {static_cast<std::uint32_t>(i), (*input_)[i]};
}

StreamItem ArrayStream::next_forward() {
  const StreamItem it = at(forward_);
  ++forward_;
  return it;
}

void ArrayStream::activate(std::size_t begin, std::size_t end) {
  forward_ = end;
  active_.push_back({begin, end});
}

StreamItem ArrayStream::step_back() {
  while (active_.back().next == active_.back().begin) active_.pop_back();
  ++reverse_reads_;
  return at(--active_.back().next);
}

void nearest_smaller_pairs(SortedStream& stream, std::size_t s, WorkspaceBudget* budget,
                           const PairFn& emit, std::optional<std::size_t> only_round) {
  if (s < 2) throw std::invalid_argument("nearest-smaller rounds need s >= 2");
  const std::size_t k = stream.size();
  if (k < 2) return;
  WorkspaceGrant regs(budget, kNsrScalarWords);
  const bool rev = stream.reversed();
  auto mpos = [&](std::size_t pos) { return rev ? k - 1 - pos : pos; };
  Heights height(stream.base_first(), stream.base_last(), k);

  mvector<Frame> stack{Metered<Frame>(budget)};
  stack.reserve(s);

  const std::size_t rounds = nsr_rounds(k, s);
  std::size_t sub = 1;
  for (std::size_t i = 1; i < rounds; ++i) sub *= s;
  for (std::size_t round = 0; round < rounds; ++round, sub /= s) {
    if (only_round && *only_round != round) continue;
    const std::size_t block = sub * s;
    stream.begin_round();
    for (std::size_t b0 = 0; b0 < k; b0 += block) {
      const std::size_t b1 = std::min(k, b0 + block);
      stack.clear();
      for (std::size_t sb = b0; sb < b1; sb += sub) {
        const std::size_t se = std::min(b1, sb + sub);
        stream.enter_sub_block(sb);
        if (sb > b0) {
          std::size_t r = sb;
          bool have = false;
          StreamItem right{};
          HeightKey right_key{};
          while (r < se && !stack.empty()) {
            if (!have) {
              right = stream.next_forward();
              right_key = height(right.p, mpos(r));
              have = true;
            }
            Frame& top = stack.back();
            if (height_less(right_key, top.key)) {
              const std::size_t a = mpos(top.l), b = mpos(r);
              if (a < b) emit(a, top.idx, b, right.index);
              else emit(b, right.index, a, top.idx);
              // Walk left to the first element below the reported one.
              bool popped = true;
              while (top.l > top.begin) {
                const StreamItem it = stream.step_back();
                --top.l;
                const HeightKey key = height(it.p, mpos(top.l));
                if (height_less(key, top.key)) {
                  top.key = key;
                  top.idx = it.index;
                  popped = false;
                  break;
                }
              }
              if (popped) stack.pop_back();
            } else {
              ++r;
              have = false;
            }
          }
        }
        stream.activate(sb, se);
        const StreamItem it = stream.step_back();
        stack.push_back({se - 1, sb, height(it.p, mpos(se - 1)), it.index});
      }
      stream.end_block();
    }
    stream.end_round();
  }
}

PairFn diagonal_emitter(std::size_t k, OutputSink& sink) {
  return [k, &sink](std::size_t lp, std::uint32_t li, std::size_t rp, std::uint32_t ri) {
    if (rp - lp > 1 && !(lp == 0 && rp == k - 1)) sink.edge(li, ri);
  };
}

void triangulate_mountain(SortedStream& forward, SortedStream& reverse, std::size_t s,
                          WorkspaceBudget* budget, OutputSink& sink) {
  const std::size_t k = forward.size();
  if (k < 4) return;  // a triangle has no diagonal
  const PairFn emit = diagonal_emitter(k, sink);
  nearest_smaller_pairs(forward, s, budget, emit);
  nearest_smaller_pairs(reverse, s, budget, emit);
}

void triangulate_mountain(const ReadOnlyArray& input, std::size_t offset, std::size_t length,
                          std::size_t s, WorkspaceBudget* budget, OutputSink& sink) {
  ArrayStream fwd(input, offset, length, false, budget);
  ArrayStream rev(input, offset, length, true, budget);
  triangulate_mountain(fwd, rev, s, budget, sink);
}

void triangulate_mountain_in_memory(const mvector<StreamItem>& vertices, OutputSink& sink) {
  const std::size_t k = vertices.size();
  if (k < 4) return;
  Heights height(vertices.front().p, vertices.back().p, k);
  mvector<std::pair<HeightKey, std::uint32_t>> stack{vertices.get_allocator()};
  stack.reserve(k);
  const PairFn emit = diagonal_emitter(k, sink);
  for (std::size_t r = 0; r < k; ++r) {
    const HeightKey key = height(vertices[r].p, r);
    while (!stack.empty() && height_less(key, stack.back().first)) {
      emit(stack.back().first.pos, stack.back().second, r, vertices[r].index);
      stack.pop_back();
    }
    if (!stack.empty())
      emit(stack.back().first.pos, stack.back().second, r, vertices[r].index);
    stack.push_back({key, vertices[r].index});
  }
}

}  // namespace cws
