#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cws/geometry.hpp"
#include "cws/workspace.hpp"

namespace cws {

/// One mountain vertex as delivered by a stream.
struct StreamItem {
  std::uint32_t index = 0;  // global input index
  Point p;
};

/// Sorted access to the vertices of a mountain, as the nearest-smaller
/// procedure consumes them. Positions are 0..size()-1 in stream order (a
/// reversed stream delivers the mountain right to left).
///
/// Within one block the procedure calls, for each sub-block in order:
/// next_forward() some number of times, then activate(begin, end), which
/// skips the forward cursor to `end` and makes the sub-block available for
/// step_back(). step_back() serves the rightmost not yet served element of
/// the most recently activated sub-block that still has elements; the caller
/// never asks past a sub-block's first element.
class SortedStream {
 public:
  virtual ~SortedStream() = default;

  virtual std::size_t size() const = 0;
  /// Base endpoints in mountain order (not stream order).
  virtual Point base_first() const = 0;
  virtual Point base_last() const = 0;
  virtual bool reversed() const = 0;

  virtual void begin_round() = 0;
  /// Called with the forward cursor at `begin`, before a sub-block is read.
  virtual void enter_sub_block(std::size_t /*begin*/) {}
  virtual StreamItem next_forward() = 0;
  virtual void activate(std::size_t begin, std::size_t end) = 0;
  virtual StreamItem step_back() = 0;
  virtual void end_block() = 0;
  virtual void end_round() {}
};

/// Stream over a contiguous, already sorted slice of a read-only array.
class ArrayStream final : public SortedStream {
 public:
  ArrayStream(const ReadOnlyArray& input, std::size_t offset, std::size_t length,
              bool reversed, WorkspaceBudget* budget);

  std::size_t size() const override { return length_; }
  Point base_first() const override { return first_; }
  Point base_last() const override { return last_; }
  bool reversed() const override { return reversed_; }

  void begin_round() override { forward_ = 0; }
  StreamItem next_forward() override;
  void activate(std::size_t begin, std::size_t end) override;
  StreamItem step_back() override;
  void end_block() override { active_.clear(); }

  /// Reverse reads served, for the "each sub-block reread once" property.
  std::uint64_t reverse_reads() const { return reverse_reads_; }

 private:
  StreamItem at(std::size_t pos) const;

  const ReadOnlyArray* input_;
  std::size_t offset_;
  std::size_t length_;
  bool reversed_;
  Point first_;
  Point last_;
  std::size_t forward_ = 0;
  struct Active {
    std::size_t begin;
    std::size_t next;  // one past the next element to serve
  };
  mvector<Active> active_;
  std::uint64_t reverse_reads_ = 0;
  WorkspaceGrant scalars_;
};

/// Receives a nearest-smaller pair as mountain positions (left < right) and
/// global indices.
using PairFn = std::function<void(std::size_t left_pos, std::uint32_t left_idx,
                                  std::size_t right_pos, std::uint32_t right_idx)>;

/// Number of rounds: ceil(log_s k).
std::size_t nsr_rounds(std::size_t k, std::size_t s);

/// Runs the block-structured nearest-smaller-right procedure over the
/// stream. On a reversed stream this yields the nearest-smaller-left pairs.
/// Heights are doubled areas against the base with ties broken toward the
/// smaller mountain position. Only rounds [first_round, last_round) run;
/// by default all of them.
void nearest_smaller_pairs(SortedStream& stream, std::size_t s, WorkspaceBudget* budget,
                           const PairFn& emit,
                           std::optional<std::size_t> only_round = std::nullopt);

/// Filters nearest-smaller pairs of a k-vertex mountain down to diagonals.
PairFn diagonal_emitter(std::size_t k, OutputSink& sink);

/// Triangulates the mountain reachable through the forward and reverse
/// streams: emits every diagonal (nearest-smaller pairs that are neither
/// polygon edges nor the base). Together with the k-1 chain edges and the
/// base this gives 2k-3 edges.
void triangulate_mountain(SortedStream& forward, SortedStream& reverse, std::size_t s,
                          WorkspaceBudget* budget, OutputSink& sink);

/// Convenience: mountain stored sorted in input[offset, offset+length).
void triangulate_mountain(const ReadOnlyArray& input, std::size_t offset, std::size_t length,
                          std::size_t s, WorkspaceBudget* budget, OutputSink& sink);

/// Linear stack algorithm for a mountain small enough to hold in the
/// workspace. Vertices are given in x-order; emits the same diagonals.
void triangulate_mountain_in_memory(const mvector<StreamItem>& vertices, OutputSink& sink);

}  // namespace cws
