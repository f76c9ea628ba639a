#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "cws/cw_heap.hpp"
#include "cws/mountain.hpp"
#include "cws/workspace.hpp"

namespace cws {

/// Mountain vertices delivered by extracting from clones of a heap whose
/// next `size` extractions are the mountain in stream order. Sub-blocks are
/// reread into a heap of the opposite order restricted to a set of intervals,
/// so step_back() is one extraction there.
class HeapStream final : public SortedStream {
 public:
  HeapStream(const ReadOnlyArray& input, const CwHeap& base, std::size_t size, Point first,
             Point last, bool reversed, std::size_t s, WorkspaceBudget* budget);

  std::size_t size() const override { return size_; }
  Point base_first() const override { return first_; }
  Point base_last() const override { return last_; }
  bool reversed() const override { return reversed_; }

  void begin_round() override;
  void enter_sub_block(std::size_t begin) override;
  StreamItem next_forward() override;
  void activate(std::size_t begin, std::size_t end) override;
  StreamItem step_back() override;
  void end_block() override;
  void end_round() override;

 private:
  const CwHeap* base_;
  std::size_t size_;
  Point first_;
  Point last_;
  bool reversed_;
  std::size_t forward_ = 0;
  std::optional<CwHeap> round_;   // forward cursor for the current round
  std::optional<CwHeap> reread_;  // positioned at the current sub-block's start
  ActiveIntervals intervals_;
  CwHeap back_;
  WorkspaceGrant scalars_;
};

/// Workspace words per unit of s that a triangulation run may use.
inline constexpr std::size_t kTriangulationWordsPerS = 64;

/// Called once per mountain face: its base endpoints, its vertex count
/// (endpoints included) and whether it lies below an upper hull edge.
using FaceFn = std::function<void(std::uint32_t a, std::uint32_t b, std::size_t k, bool upper)>;

struct TriangulateOptions {
  std::size_t s = 64;
  FaceFn on_face;
};

/// Triangulates points given in lexicographically increasing order. Emits
/// 3n-3-h edges where h counts hull points including collinear ones.
/// Throws NotSorted when the order is violated and DegenerateInput when all
/// points are collinear.
void triangulate_sorted(const ReadOnlyArray& input, const TriangulateOptions& opt,
                        WorkspaceBudget* budget, OutputSink& sink);

/// Throws Error(degenerate_input) when n >= 3 and all points are collinear.
void reject_collinear(const ReadOnlyArray& input);

/// The same triangulation for points in arbitrary order, reaching the points
/// in sorted order through heaps.
void triangulate_general(const ReadOnlyArray& input, const TriangulateOptions& opt,
                         WorkspaceBudget* budget, OutputSink& sink);

}  // namespace cws
