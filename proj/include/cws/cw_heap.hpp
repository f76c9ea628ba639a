#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cws/geometry.hpp"
#include "cws/workspace.hpp"

namespace cws {

/// Heap key: a point and its array index. Keys are ordered by (x, y) and
/// then by index, so equal coordinates never tie.
struct HeapKey {
  Point p;
  std::uint32_t idx = 0;

  friend bool operator==(const HeapKey&, const HeapKey&) = default;
};

inline bool key_less(const HeapKey& a, const HeapKey& b) {
  return a.p < b.p || (a.p == b.p && a.idx < b.idx);
}

enum class HeapOrder { ascending, descending };

inline HeapOrder reversed(HeapOrder o) {
  return o == HeapOrder::ascending ? HeapOrder::descending : HeapOrder::ascending;
}

/// True iff a comes out of a heap of the given order before b.
inline bool key_before(const HeapKey& a, const HeapKey& b, HeapOrder o) {
  return o == HeapOrder::ascending ? key_less(a, b) : key_less(b, a);
}

struct KeyBound {
  HeapKey key;
  bool open = false;  // open bounds exclude the key itself
};

/// Sorted disjoint key intervals. A membership query is a binary search, so
/// it costs O(log s) for at most O(s) intervals.
class ActiveIntervals {
 public:
  explicit ActiveIntervals(WorkspaceBudget* budget = nullptr)
      : intervals_(Metered<Interval>(budget)) {}

  /// Starts a new single-key interval; it must not overlap existing ones.
  void open(const HeapKey& anchor);
  /// Grows the interval containing `anchor` so that it also covers `to`.
  void extend(const HeapKey& anchor, const HeapKey& to);
  bool contains(const HeapKey& k) const;
  /// Removes `k` from the end of its interval that a heap of order `o`
  /// extracts from; drops the interval once it is empty.
  void on_extract(const HeapKey& k, HeapOrder o);
  void clear() { intervals_.clear(); }
  std::size_t size() const { return intervals_.size(); }

 private:
  struct Interval {
    KeyBound lo;
    KeyBound hi;
  };
  // Index of the interval that may contain k, or npos.
  std::size_t find(const HeapKey& k) const;
  static bool inside(const Interval& iv, const HeapKey& k);

  mvector<Interval> intervals_;
};

/// Decides whether an array element currently resides in the heap.
/// Window: alive iff the key lies between two bounds; extraction moves the
/// bound on the extraction side past the extracted key (the "last extracted
/// minimum" test, O(1)). Intervals: alive iff inside an active interval.
class AlivePredicate {
 public:
  static AlivePredicate all() { return AlivePredicate{}; }
  static AlivePredicate window(std::optional<KeyBound> lo, std::optional<KeyBound> hi) {
    AlivePredicate a;
    a.lo_ = lo;
    a.hi_ = hi;
    return a;
  }
  static AlivePredicate intervals(ActiveIntervals* set) {
    AlivePredicate a;
    a.set_ = set;
    return a;
  }
  /// One flag per array index, cleared on extraction. Unmetered; used by
  /// tests that need arbitrary insertion patterns.
  static AlivePredicate flags(std::vector<char>* alive) {
    AlivePredicate a;
    a.flags_ = alive;
    return a;
  }

  bool operator()(const HeapKey& k) const {
    if (set_ != nullptr) return set_->contains(k);
    if (flags_ != nullptr) return (*flags_)[k.idx] != 0;
    if (lo_ && (key_less(k, lo_->key) || (lo_->open && k == lo_->key))) return false;
    if (hi_ && (key_less(hi_->key, k) || (hi_->open && k == hi_->key))) return false;
    return true;
  }

  void on_extract(const HeapKey& k, HeapOrder o) {
    if (set_ != nullptr) {
      set_->on_extract(k, o);
    } else if (flags_ != nullptr) {
      (*flags_)[k.idx] = 0;
    } else if (o == HeapOrder::ascending) {
      lo_ = KeyBound{k, true};
    } else {
      hi_ = KeyBound{k, true};
    }
  }

 private:
  std::optional<KeyBound> lo_;
  std::optional<KeyBound> hi_;
  ActiveIntervals* set_ = nullptr;
  std::vector<char>* flags_ = nullptr;
};

/// Priority queue over a region of a read-only array using O(s) words.
///
/// The region is split into a power-of-two number of equal buckets (about
/// s * log n of them) with a complete binary tree on top. A node of height h
/// keeps only min(2h, log n) bits: which bucket below it holds its best alive
/// element, and which of 2^h quantiles of that bucket. The element itself is
/// recovered by rescanning the quantile. Leaves keep nothing and are
/// recovered by rescanning the whole bucket.
///
/// Invariant: every node either names the quantile holding the best alive
/// element of its subtree, or its subtree has no alive element.
class CwHeap {
 public:
  CwHeap(const ReadOnlyArray& input, std::size_t offset, std::size_t length,
         std::size_t s, HeapOrder order, AlivePredicate alive,
         WorkspaceBudget* budget);

  CwHeap(const CwHeap& o);
  CwHeap& operator=(const CwHeap&) = delete;
  CwHeap(CwHeap&&) noexcept = default;
  CwHeap& operator=(CwHeap&&) noexcept = default;

  /// Duplicates the O(s) state variables; the copy behaves identically.
  CwHeap clone() const { return CwHeap(*this); }

  /// Removes and returns the best alive element (minimum for ascending,
  /// maximum for descending), or nullopt when empty.
  std::optional<HeapKey> extract();
  /// Current best element without removing it. Costs no input reads.
  const std::optional<HeapKey>& top() const { return top_; }
  bool empty() const { return !top_.has_value(); }

  /// Registers an element that has just become alive under the predicate.
  void insert(std::size_t index);

  /// For use after the predicate has been changed so that nothing is alive:
  /// every node then trivially satisfies the invariant, so no bits change.
  void forget_all() { top_.reset(); }

  AlivePredicate& alive() { return alive_; }
  HeapOrder order() const { return order_; }
  std::size_t bucket_count() const { return buckets_; }
  std::size_t bucket_size() const { return bucket_size_; }
  std::size_t info_bits() const { return total_bits_; }

  /// Recomputes the best alive element of node (h, j) exhaustively, without
  /// touching the read counter. Test hook for the node invariant.
  std::optional<HeapKey> exhaustive_best(std::size_t h, std::size_t j) const;
  /// Best alive element as recovered from the information bits. Counts reads.
  std::optional<HeapKey> recovered_best(std::size_t h, std::size_t j) const {
    return node_best(h, j);
  }
  std::size_t height() const { return height_; }

 private:
  struct Range {
    std::size_t lo;
    std::size_t hi;
  };

  std::optional<HeapKey> scan(Range r) const;
  std::optional<HeapKey> node_best(std::size_t h, std::size_t j) const;
  Range decode(std::size_t h, std::size_t j) const;
  void encode(std::size_t h, std::size_t j, const HeapKey& k);
  const std::optional<HeapKey>& better(const std::optional<HeapKey>& a,
                                       const std::optional<HeapKey>& b) const;
  Range bucket_range(std::size_t b) const;

  bool direct(std::size_t h) const { return 2 * h >= index_bits_; }
  std::size_t quantiles(std::size_t h) const;
  std::size_t quantile_size(std::size_t h) const;
  std::uint64_t get_field(std::size_t h, std::size_t j) const;
  void set_field(std::size_t h, std::size_t j, std::uint64_t v);

  const ReadOnlyArray* input_;
  std::size_t offset_;
  std::size_t length_;
  HeapOrder order_;
  AlivePredicate alive_;
  std::size_t buckets_ = 1;
  std::size_t bucket_size_ = 1;
  std::size_t height_ = 0;
  std::size_t index_bits_ = 1;
  std::size_t total_bits_ = 0;
  std::optional<HeapKey> top_;
  mvector<std::uint32_t> level_offset_;  // bit offset of each level
  mvector<std::uint8_t> level_width_;    // field width of each level
  mvector<std::uint64_t> bits_;
  WorkspaceGrant scalars_;
};

/// ceil(log2(x)) for x >= 1.
std::size_t ceil_log2(std::size_t x);

}  // namespace cws
