#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "cws/geometry.hpp"
#include "cws/workspace.hpp"

namespace cws {

/// Delaunay triangulation of a set of sites inside the symbolic triangle K,
/// built by incremental insertion with flips under the perturbed incircle
/// test. Replaced triangles stay in the array and point to their successors,
/// so the array doubles as a point-location structure (expected logarithmic
/// depth when sites arrive in random order). Site coordinates are copied in,
/// so queries cost no input reads.
class KDelaunay {
 public:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  struct Tri {
    std::array<std::uint32_t, 3> v{};   // local site numbers, counterclockwise
    // Live: nb[i] lies across the edge opposite v[i]. Retired: the children
    // that replaced this triangle, kNone-padded.
    std::array<std::uint32_t, 3> nb{};
    bool alive = true;
  };

  explicit KDelaunay(WorkspaceBudget* budget);

  void reserve(std::size_t sites);
  /// Inserts a finite site; returns its local number. Throws
  /// Error(degenerate_input) when the point is already present.
  std::uint32_t insert(const Site& s);

  std::size_t site_count() const { return sites_.size(); }
  const Site& site(std::uint32_t local) const { return sites_[local]; }
  const mvector<Tri>& triangles() const { return tris_; }
  const Tri& tri(std::uint32_t t) const { return tris_[t]; }

  /// A live triangle containing q, boundary included.
  std::uint32_t locate(const SitePoint& q) const;

  /// Index of v within triangle t.
  static int corner(const Tri& t, std::uint32_t v) {
    return t.v[0] == v ? 0 : t.v[1] == v ? 1 : 2;
  }
  /// Triangle that follows t counterclockwise around its vertex v.
  std::uint32_t ccw_around(std::uint32_t t, std::uint32_t v) const {
    const Tri& x = tris_[t];
    return x.nb[(corner(x, v) + 1) % 3];
  }
  /// Some live triangle incident to the site (kNone before the first insert).
  std::uint32_t incident(std::uint32_t local) const { return incident_[local]; }

  bool is_k(std::uint32_t local) const { return local < 3; }

 private:
  bool contains(const Tri& t, const SitePoint& q) const;
  std::uint32_t make(std::uint32_t a, std::uint32_t b, std::uint32_t c);
  void relink(std::uint32_t o, std::uint32_t from, std::uint32_t to);
  void retire(std::uint32_t t, std::initializer_list<std::uint32_t> kids);
  void legalize(std::uint32_t t, std::uint32_t p);

  mvector<Site> sites_;
  mvector<Tri> tris_;
  mvector<std::uint32_t> incident_;
  mvector<std::uint32_t> pending_;
  WorkspaceGrant scalars_;
};

}  // namespace cws
