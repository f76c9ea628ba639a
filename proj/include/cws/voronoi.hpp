#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "cws/delaunay.hpp"
#include "cws/sampler.hpp"
#include "cws/workspace.hpp"

namespace cws {

struct VoronoiConfig {
  double c_M = 5;         // conflict mass threshold M = c_M * n
  double c_T = 6;         // excess threshold T = c_T * s
  double alpha = 2;       // per-vertex sample multiplier
  std::size_t round_cap = 8;
  std::size_t max_restarts = 64;
  double c_B = 8;         // wedge conflict sets may hold c_B * n/s + 8 points
  double c_W = 64;        // conflict points gathered per scan, in units of s
  double c_S = 8;         // per-vertex samples held at once, in units of s
  double c_words = 1024;  // budget constant: c_words * (s + n/s) words

  /// Flat key=value file; unknown keys are an error, '#' starts a comment.
  static VoronoiConfig load(const std::string& path);
};

enum class VoronoiEmit { vertices, delaunay };

struct VoronoiStats {
  std::size_t attempts = 0;
  std::size_t restarts_mass = 0;
  std::size_t restarts_excess = 0;
  std::size_t restarts_round_cap = 0;
  std::size_t restarts_overflow = 0;
  std::uint64_t conflict_mass = 0;  // sum of b_v in the accepted first phase
  double excess = 0;                // sum of t_v log t_v over t_v >= 2
  std::size_t bad_candidates = 0;   // vertices with t_v >= 2
  std::size_t rounds = 0;           // amplification rounds of the accepted attempt
  bool round_cap_hit = false;
  std::size_t fallbacks = 0;
  std::size_t r2_size = 0;
  std::size_t wedges = 0;
  std::size_t max_wedge_set = 0;
  std::uint64_t total_wedge_set = 0;
  std::size_t scans = 0;
};

/// A circumcenter or input point in homogeneous form (X/W, Y/W), W > 0.
struct HomPoint {
  i128 X = 0;
  i128 Y = 0;
  i128 W = 1;
  static HomPoint of(const Point& p) { return {p.x, p.y, 1}; }
};

/// Voronoi diagram of a sample together with K, with every cell of a sample
/// site cut into wedges (site, v_j, v_j+1) between consecutive Voronoi
/// vertices. Wedge ids number the cells in insertion order, and within a
/// cell start at the incident triangle of smallest id and run
/// counterclockwise.
class SampleDiagram {
 public:
  SampleDiagram(const ReadOnlyArray& input, std::span<const std::uint32_t> sites,
                WorkspaceBudget* budget);

  const KDelaunay& dt() const { return dt_; }

  /// Voronoi vertices are the live triangles, numbered 0..vertex_count()-1.
  std::size_t vertex_count() const { return live_.size(); }
  std::uint32_t vertex_triangle(std::uint32_t v) const { return live_[v]; }
  std::array<Site, 3> vertex_sites(std::uint32_t v) const;
  bool vertex_finite(std::uint32_t v) const;

  /// Whether input point i is one of the diagram's sites.
  bool is_site(std::uint32_t i) const;

  /// Calls fn(v) for every vertex whose conflict circle contains p. The
  /// strict form uses the perturbed test and skips sites; the closed form
  /// uses the exact test and counts points on the circle, sites included.
  template <class Fn>
  void for_each_conflict(std::uint32_t i, const Point& p, bool closed, Fn&& fn);

  std::size_t wedge_count() const { return wedge_site_.size(); }
  std::uint32_t wedge_site(std::uint32_t w) const { return wedge_site_[w]; }  // local site
  /// Corner vertices (v_j, v_j+1) of a wedge.
  std::pair<std::uint32_t, std::uint32_t> wedge_corners(std::uint32_t w) const;
  /// The two wedges that have vertex v as a corner in the cell of site r.
  std::pair<std::uint32_t, std::uint32_t> wedges_at(std::uint32_t v, std::uint32_t r) const;

  /// Closed containment of x in a wedge; `in_cell` may be passed when x is
  /// already known to be in the closed cell.
  bool wedge_contains(std::uint32_t w, const HomPoint& x, bool in_cell = false) const;
  /// The smallest wedge id among the wedges containing x, starting the
  /// nearest-site search at local site `start`.
  std::uint32_t owner(const HomPoint& x, std::uint32_t start) const;
  /// Smallest-id wedge containing an input-range point.
  std::uint32_t locate_wedge(const Point& p) const;

 private:
  std::uint32_t nearest_site(const HomPoint& x, std::uint32_t start) const;
  int closer(const HomPoint& x, std::uint32_t a, std::uint32_t b) const;
  template <class Fn>
  void for_each_neighbor(std::uint32_t r, Fn&& fn) const;

  KDelaunay dt_;
  mvector<std::uint32_t> live_;
  mvector<std::uint32_t> slot_;        // history triangle -> vertex number or kNone
  mvector<std::uint32_t> sorted_ids_;  // input indices of the sites, sorted
  mvector<std::uint32_t> wedge_site_;
  mvector<std::uint32_t> wedge_tri_;    // triangle of the first corner
  mvector<std::uint32_t> cell_begin_;   // per local site
  mvector<std::uint32_t> first_wedge_;  // per vertex and corner
  mvector<std::uint32_t> stamp_;
  mvector<std::uint32_t> stack_;
  std::uint32_t epoch_ = 0;
  WorkspaceGrant scalars_;
};

/// Computes the Voronoi vertices (or the dual Delaunay edges) of the input
/// with O(s + n/s) words of workspace.
VoronoiStats voronoi(const ReadOnlyArray& input, std::size_t s, const VoronoiConfig& cfg,
                     VoronoiEmit mode, Rng& rng, WorkspaceBudget* budget, OutputSink& sink);

/// Sign of orient(r, v, x) where v is the (possibly symbolic) circumcenter
/// of the counterclockwise sites a, b, c.
int orient_to_center(const Point& r, const SitePoint& a, const SitePoint& b, const SitePoint& c,
                     const HomPoint& x);
/// Sign of the dot product (v - r) . (x - r) for the same center v.
int dot_to_center(const Point& r, const SitePoint& a, const SitePoint& b, const SitePoint& c,
                  const HomPoint& x);

// ---------------------------------------------------------------------------

template <class Fn>
void SampleDiagram::for_each_conflict(std::uint32_t i, const Point& p, bool closed, Fn&& fn) {
  const Site q{SitePoint::finite(p), i};
  if (!closed && is_site(i)) return;
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  auto conflicts = [&](std::uint32_t t) {
    const auto& x = dt_.tri(t);
    const Site& a = dt_.site(x.v[0]);
    const Site& b = dt_.site(x.v[1]);
    const Site& c = dt_.site(x.v[2]);
    return closed ? incircle(a.pt, b.pt, c.pt, q.pt) >= 0 : incircle_sos(a, b, c, q) > 0;
  };
  const std::uint32_t seed = dt_.locate(q.pt);
  if (!conflicts(seed)) return;
  stack_.clear();
  stack_.push_back(seed);
  stamp_[slot_[seed]] = epoch_;
  while (!stack_.empty()) {
    const std::uint32_t t = stack_.back();
    stack_.pop_back();
    fn(slot_[t]);
    for (auto o : dt_.tri(t).nb) {
      if (o == KDelaunay::kNone || stamp_[slot_[o]] == epoch_) continue;
      stamp_[slot_[o]] = epoch_;
      if (conflicts(o)) stack_.push_back(o);
    }
  }
}

}  // namespace cws
