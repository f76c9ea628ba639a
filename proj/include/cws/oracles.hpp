#pragma once

// Unconstrained reference implementations. None of these obey the workspace
// budget; they define ground truth for tests, calibration and `verify`.

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cws/geometry.hpp"
#include "cws/workspace.hpp"

namespace cws::oracle {

using Edge = std::pair<std::uint32_t, std::uint32_t>;  // first < second
using Triangle = std::array<std::uint32_t, 3>;         // counterclockwise

/// Hull vertex cycle, clockwise, starting at the lexicographically smallest
/// point. With include_collinear, points in the relative interior of hull
/// edges are part of the cycle. All points collinear: the two extremes.
std::vector<std::uint32_t> hull(std::span<const Point> pts, bool include_collinear);

/// Directed clockwise hull edges of the cycle above.
std::vector<Edge> hull_edges(std::span<const Point> pts, bool include_collinear);

struct NsPairs {
  std::vector<Edge> nsr;  // (l, r): r is the nearest smaller right neighbor of l
  std::vector<Edge> nsl;  // (l, r): l is the nearest smaller left neighbor of r
};

/// Linear stack pass over heights; equal heights are ordered by position.
NsPairs nsr_nsl(std::span<const i128> heights);

/// Heights of mountain vertices (x-sorted, base first..last) as used by the
/// constrained mountain code: doubled distance to the base, made positive.
std::vector<i128> mountain_heights(std::span<const Point> chain);

struct Diagram {
  std::vector<Triangle> triangles;
  std::vector<EmittedVertex> vertices;  // sorted
  std::vector<Edge> edges;              // sorted, unique
  std::vector<std::uint32_t> hull;      // inclusive hull cycle
};

/// Delaunay triangulation under the shared symbolic tie-break (site id =
/// index), by a plane sweep followed by Lawson flips. Throws
/// Error(degenerate_input) when all points are collinear.
Diagram delaunay(std::span<const Point> pts);

/// O(n^4) reference: every counterclockwise triple whose perturbed
/// circumcircle contains no other point.
std::vector<Triangle> delaunay_brute_force(std::span<const Point> pts);

/// Points strictly inside the perturbed circle through the counterclockwise
/// sites a, b, c; the defining sites themselves are excluded.
std::vector<std::uint32_t> conflicts(std::span<const Point> pts, const Site& a, const Site& b,
                                     const Site& c);

inline Site site_of(std::span<const Point> pts, std::uint32_t i) {
  return {SitePoint::finite(pts[i]), i};
}

Triangle canonical(Triangle t);  // rotate so the smallest index is first

}  // namespace cws::oracle

namespace cws::validate {

struct Report {
  bool ok = true;
  std::string message;
};

/// Checks that edges (plus nothing else) form a triangulation of the point
/// set: no duplicate or degenerate edges, every bounded face of the planar
/// embedding is a counterclockwise triangle, Euler's relation holds, the
/// triangle areas sum to the hull area, and all hull edges are present.
/// Together these exclude proper crossings.
Report triangulation(std::span<const Point> pts,
                     std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);

/// Number of properly crossing or overlapping edge pairs. Every pair with
/// meeting bounding boxes gets the exact test.
std::size_t crossing_pairs(std::span<const Point> pts,
                           std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);

}  // namespace cws::validate
