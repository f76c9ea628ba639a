#include "cws/hull.hpp"

#include <algorithm>

namespace cws {

HullCursor::HullCursor(const ReadOnlyArray& input, std::size_t s, WorkspaceBudget* budget,
                       HullOptions opt)
    : input_(&input),
      n_(input.size()),
      s_(std::max<std::size_t>(s, 1)),
      budget_(budget),
      opt_(opt),
      chain_(Metered<HeapKey>(budget)),
      scalars_(budget, 24) {
  chain_.reserve(s_ + 1);
  if (n_ == 0) {
    phase_ = 2;
    return;
  }
  start_phase();
}

HeapKey HullCursor::read(std::size_t i) const {
  return {(*input_)[i], static_cast<std::uint32_t>(i)};
}

void HullCursor::start_phase() {
  if (opt_.sorted_input) {
    pos_ = 0;
    p_ = read(phase_ == 0 ? 0 : n_ - 1);
    return;
  }
  heap_.reset();
  heap_.emplace(*input_, 0, n_, s_, phase_ == 0 ? HeapOrder::ascending : HeapOrder::descending,
                AlivePredicate::window(std::nullopt, std::nullopt), budget_);
  p_ = heap_->extract();
}

bool HullCursor::keep(const HeapKey& a, const HeapKey& b, const HeapKey& r) const {
  const int o = orient(tf(a.p), tf(b.p), tf(r.p));
  return opt_.include_collinear ? o <= 0 : o < 0;
}

std::size_t HullCursor::tangent(const HeapKey& r) const {
  std::size_t lo = 0, hi = chain_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    if (keep(chain_[mid - 1], chain_[mid], r)) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

template <class Fn>
void HullCursor::for_each_rest(const HeapKey& last, Fn&& fn) {
  if (opt_.sorted_input) {
    HeapKey prev = last;
    for (std::size_t pos = pos_ + 1 + (chain_batch_size_); pos < n_; ++pos) {
      const HeapKey k = read(phase_ == 0 ? pos : n_ - 1 - pos);
      if (!before(prev, k)) throw Error(ErrorKind::not_sorted, "input is not sorted");
      prev = k;
      fn(k);
    }
    return;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    const HeapKey k = read(i);
    if (before(last, k)) fn(k);
  }
}

bool HullCursor::start_round() {
  chain_.clear();
  chain_.push_back(*p_);
  std::optional<HeapKey> last;
  chain_batch_size_ = 0;
  for (std::size_t i = 0; i < s_; ++i) {
    std::optional<HeapKey> k;
    if (opt_.sorted_input) {
      const std::size_t pos = pos_ + 1 + i;
      if (pos >= n_) break;
      k = read(phase_ == 0 ? pos : n_ - 1 - pos);
      if (!before(last ? *last : *p_, *k))
        throw Error(ErrorKind::not_sorted, "input is not sorted");
    } else {
      k = heap_->extract();
      if (!k) break;
    }
    ++chain_batch_size_;
    last = k;
    while (chain_.size() >= 2 && !keep(chain_[chain_.size() - 2], chain_.back(), *k))
      chain_.pop_back();
    chain_.push_back(*k);
  }
  if (!last) return false;

  std::size_t t = chain_.size() - 1;
  bool any = false;
  for_each_rest(*last, [&](const HeapKey& r) {
    any = true;
    t = std::min(t, tangent(r));
  });
  emit_next_ = 0;
  if (!any) {
    emit_end_ = chain_.size() - 1;
    wrap_to_.reset();
    phase_ends_ = true;
    return true;
  }
  const HeapKey a = chain_[t];
  std::optional<HeapKey> best;
  for_each_rest(*last, [&](const HeapKey& r) {
    if (!best) {
      best = r;
      return;
    }
    const int o = orient(tf(a.p), tf(best->p), tf(r.p));
    if (o > 0 || (o == 0 && (opt_.include_collinear ? before(r, *best) : before(*best, r))))
      best = r;
  });
  emit_end_ = t;
  wrap_to_ = best;
  phase_ends_ = false;
  return true;
}

void HullCursor::advance_through(const HeapKey& q) {
  if (opt_.sorted_input) {
    pos_ = phase_ == 0 ? q.idx : n_ - 1 - q.idx;
    return;
  }
  while (auto k = heap_->extract())
    if (k->idx == q.idx) break;
}

std::optional<HullEdge> HullCursor::next() {
  while (phase_ < 2) {
    if (emit_next_ < emit_end_) {
      const HullEdge e{chain_[emit_next_].idx, chain_[emit_next_ + 1].idx};
      ++emit_next_;
      return e;
    }
    if (wrap_to_) {
      const HeapKey q = *wrap_to_;
      wrap_to_.reset();
      const HeapKey from = chain_[emit_end_];
      advance_through(q);
      p_ = q;
      return HullEdge{from.idx, q.idx};
    }
    if (phase_ends_ || !start_round()) {
      phase_ends_ = false;
      emit_next_ = emit_end_ = 0;
      if (++phase_ < 2) start_phase();
      else heap_.reset();
    }
  }
  return std::nullopt;
}

}  // namespace cws
