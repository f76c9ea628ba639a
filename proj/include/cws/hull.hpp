#pragma once

#include <cstdint>
#include <optional>

#include "cws/cw_heap.hpp"
#include "cws/workspace.hpp"

namespace cws {

struct HullEdge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  friend bool operator==(const HullEdge&, const HullEdge&) = default;
};

struct HullOptions {
  // Report points lying in the relative interior of hull edges as vertices.
  bool include_collinear = false;
  // Input is lexicographically increasing; checked lazily while scanning.
  bool sorted_input = false;
};

/// Clockwise convex-hull edges starting at the lexicographically smallest
/// point, produced on demand with O(s) words.
///
/// Each round takes the next s points after the current vertex p, builds
/// the upper chain of p and that batch, and scans the remaining points twice:
/// once to find how much of the chain survives (a binary-searched tangent
/// per point), once to gift-wrap the next vertex beyond it. Every round moves
/// p past at least s points, so a phase costs O(n^2/s) reads plus the heap.
/// The lower hull is the upper hull of the point set rotated by 180 degrees.
class HullCursor {
 public:
  HullCursor(const ReadOnlyArray& input, std::size_t s, WorkspaceBudget* budget,
             HullOptions opt = {});

  /// Next clockwise edge, or nullopt once the cycle is complete.
  std::optional<HullEdge> next();

  /// True while edges of the upper hull (left to right) are being reported.
  bool upper_phase() const { return phase_ == 0; }

 private:
  Point tf(const Point& p) const { return phase_ == 0 ? p : Point{-p.x, -p.y}; }
  HeapKey tf(const HeapKey& k) const { return {tf(k.p), k.idx}; }
  // Order in the current phase's rotated frame.
  bool before(const HeapKey& a, const HeapKey& b) const { return key_less(tf(a), tf(b)); }

  HeapKey read(std::size_t i) const;
  void start_phase();
  bool start_round();
  std::optional<HeapKey> next_after_p();
  bool keep(const HeapKey& a, const HeapKey& b, const HeapKey& r) const;
  std::size_t tangent(const HeapKey& r) const;
  template <class Fn>
  void for_each_rest(const HeapKey& last, Fn&& fn);
  void advance_through(const HeapKey& q);

  const ReadOnlyArray* input_;
  std::size_t n_;
  std::size_t s_;
  WorkspaceBudget* budget_;
  HullOptions opt_;
  int phase_ = 0;  // 0 upper, 1 lower, 2 done
  std::optional<HeapKey> p_;
  std::optional<CwHeap> heap_;
  std::size_t pos_ = 0;  // sorted input: rotated-frame position of p
  std::size_t chain_batch_size_ = 0;
  mvector<HeapKey> chain_;
  std::size_t emit_next_ = 0;  // next chain edge to report
  std::size_t emit_end_ = 0;   // chain vertex where reporting stops
  std::optional<HeapKey> wrap_to_;
  bool phase_ends_ = false;
  WorkspaceGrant scalars_;
};

}  // namespace cws
