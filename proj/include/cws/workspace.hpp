#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cws/errors.hpp"
#include "cws/geometry.hpp"

namespace cws {

/// Read-only random-access input. Every element access through operator[]
/// is counted; there is no mutation path after construction. Copies share
/// the points but carry their own counter.
class ReadOnlyArray {
 public:
  ReadOnlyArray() : data_(std::make_shared<const std::vector<Point>>()) {}
  explicit ReadOnlyArray(std::vector<Point> points)
      : data_(std::make_shared<const std::vector<Point>>(std::move(points))) {}

  std::size_t size() const { return data_->size(); }

  Point operator[](std::size_t i) const {
    ++reads_;
    return (*data_)[i];
  }

  std::uint64_t reads() const { return reads_; }
  void reset_reads() { reads_ = 0; }

  /// FNV-1a over the raw coordinates; not counted as algorithm reads.
  std::uint64_t content_hash() const;

  /// Uncounted view for oracles, validators and the harness only.
  std::span<const Point> unmetered() const { return *data_; }

 private:
  std::shared_ptr<const std::vector<Point>> data_;
  mutable std::uint64_t reads_ = 0;
};

/// Metered mutable workspace measured in machine words (8 bytes).
class WorkspaceBudget {
 public:
  explicit WorkspaceBudget(std::size_t limit_words) : limit_(limit_words) {}

  void alloc(std::size_t words) {
    if (current_ + words > limit_) throw BudgetExceeded(current_ + words, limit_);
    current_ += words;
    if (current_ > peak_) peak_ = current_;
  }
  void release(std::size_t words) noexcept {
    current_ = words > current_ ? 0 : current_ - words;
  }

  std::size_t limit() const { return limit_; }
  std::size_t current() const { return current_; }
  std::size_t peak() const { return peak_; }

  static constexpr std::size_t words_for_bytes(std::size_t bytes) {
    return (bytes + 7) / 8;
  }

 private:
  std::size_t limit_;
  std::size_t current_ = 0;
  std::size_t peak_ = 0;
};

/// Scoped charge for scalar state (loop registers, frame locals).
class WorkspaceGrant {
 public:
  WorkspaceGrant() = default;
  WorkspaceGrant(WorkspaceBudget* budget, std::size_t words)
      : budget_(budget), words_(words) {
    if (budget_ != nullptr) budget_->alloc(words_);
  }
  WorkspaceGrant(const WorkspaceGrant&) = delete;
  WorkspaceGrant& operator=(const WorkspaceGrant&) = delete;
  WorkspaceGrant(WorkspaceGrant&& o) noexcept
      : budget_(std::exchange(o.budget_, nullptr)), words_(o.words_) {}
  WorkspaceGrant& operator=(WorkspaceGrant&& o) noexcept {
    if (this != &o) {
      reset();
      budget_ = std::exchange(o.budget_, nullptr);
      words_ = o.words_;
    }
    return *this;
  }
  ~WorkspaceGrant() { reset(); }

  void reset() {
    if (budget_ != nullptr) budget_->release(words_);
    budget_ = nullptr;
  }

 private:
  WorkspaceBudget* budget_ = nullptr;
  std::size_t words_ = 0;
};

/// Allocator routing container storage through a WorkspaceBudget. A null
/// budget means unmetered (oracles and test scaffolding).
template <class T>
class Metered {
 public:
  using value_type = T;

  Metered() noexcept = default;
  explicit Metered(WorkspaceBudget* budget) noexcept : budget_(budget) {}
  template <class U>
  Metered(const Metered<U>& o) noexcept : budget_(o.budget()) {}

  T* allocate(std::size_t n) {
    if (budget_ != nullptr)
      budget_->alloc(WorkspaceBudget::words_for_bytes(n * sizeof(T)));
    return std::allocator<T>{}.allocate(n);
  }
  void deallocate(T* p, std::size_t n) noexcept {
    if (budget_ != nullptr)
      budget_->release(WorkspaceBudget::words_for_bytes(n * sizeof(T)));
    std::allocator<T>{}.deallocate(p, n);
  }

  WorkspaceBudget* budget() const noexcept { return budget_; }

  template <class U>
  bool operator==(const Metered<U>& o) const noexcept {
    return budget_ == o.budget();
  }

 private:
  WorkspaceBudget* budget_ = nullptr;
};

template <class T>
using mvector = std::vector<T, Metered<T>>;

struct EmittedVertex {
  std::array<std::uint32_t, 3> sites{};  // ascending
  Circumcenter center;
  friend bool operator==(const EmittedVertex&, const EmittedVertex&) = default;
  friend auto operator<=>(const EmittedVertex&, const EmittedVertex&) = default;
};

/// Append-only output. Lines are optionally teed to a stream; an optional
/// in-memory collector models the write-only output tape for tests and lives
/// outside the workspace budget.
class OutputSink {
 public:
  OutputSink() = default;
  explicit OutputSink(std::ostream* out, bool collect = false)
      : out_(out), collect_(collect) {}

  static OutputSink collecting() { return OutputSink(nullptr, true); }

  void edge(std::size_t i, std::size_t j);           // "E i j", i < j
  void hull_edge(std::size_t from, std::size_t to);  // "H from to"
  void vertex(std::array<std::uint32_t, 3> sites, const Circumcenter& c);
  void delaunay_edge(std::size_t i, std::size_t j);  // "D i j", i < j

  std::uint64_t emitted() const { return emitted_; }

  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const {
    return edges_;
  }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& hull_edges() const {
    return hull_;
  }
  const std::vector<EmittedVertex>& vertices() const { return vertices_; }

 private:
  std::ostream* out_ = nullptr;
  bool collect_ = false;
  std::uint64_t emitted_ = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> hull_;
  std::vector<EmittedVertex> vertices_;
};

struct AuditReport {
  std::size_t n = 0;
  std::size_t s = 0;
  std::size_t peak_words = 0;
  std::uint64_t input_reads = 0;
  std::uint64_t emits = 0;
  double wall_ms = 0.0;

  static std::string csv_header() { return "n,s,peak_words,input_reads,emits,wall_ms"; }
  std::string csv_row() const;

  /// Equality on everything except wall time.
  bool same_work(const AuditReport& o) const {
    return n == o.n && s == o.s && peak_words == o.peak_words &&
           input_reads == o.input_reads && emits == o.emits;
  }
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

AuditReport make_report(const ReadOnlyArray& input, std::size_t s,
                        const WorkspaceBudget& budget, const OutputSink& sink,
                        const Stopwatch& clock);

/// Parses "x y" lines; '#' lines and blank lines are skipped. Coordinates
/// outside +-2^26 are rejected.
std::vector<Point> parse_points(std::istream& in);

/// Throws Error(degenerate_input) naming the indices of the first coincident
/// pair found.
void reject_duplicates(const std::vector<Point>& points);

}  // namespace cws
