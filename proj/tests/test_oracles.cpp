#include <algorithm>
#include <random>
#include <set>

#include "cws/oracles.hpp"
#include "doctest.h"

using namespace cws;

namespace {

std::vector<Point> random_points(std::mt19937_64& rng, std::size_t n, std::int64_t range) {
  std::set<Point> seen;
  std::uniform_int_distribution<std::int64_t> c(-range, range);
  std::vector<Point> pts;
  while (pts.size() < n) {
    Point p{c(rng), c(rng)};
    if (seen.insert(p).second) pts.push_back(p);
  }
  return pts;
}

}  // namespace

TEST_CASE("three points give one triangle") {
  std::vector<Point> pts{{0, 0}, {4, 0}, {0, 4}};
  const auto d = oracle::delaunay(pts);
  REQUIRE(d.triangles.size() == 1);
  CHECK(d.triangles[0] == oracle::Triangle{0, 1, 2});
  CHECK(d.vertices[0].center.x == Rational::make(2, 1));
}

TEST_CASE("square picks the same diagonal every time") {
  std::vector<Point> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto d = oracle::delaunay(pts);
  REQUIRE(d.triangles.size() == 2);
  CHECK(std::binary_search(d.edges.begin(), d.edges.end(), oracle::Edge{1, 3}));
  CHECK_FALSE(std::binary_search(d.edges.begin(), d.edges.end(), oracle::Edge{0, 2}));
  CHECK(oracle::delaunay_brute_force(pts) == d.triangles);
}

TEST_CASE("collinear input is rejected") {
  std::vector<Point> pts{{0, 0}, {1, 1}, {2, 2}, {5, 5}};
  CHECK_THROWS_AS(oracle::delaunay(pts), Error);
}

TEST_CASE("empty circumcircles on 64 random points") {
  std::mt19937_64 rng(1);
  const auto pts = random_points(rng, 64, 1000);
  const auto d = oracle::delaunay(pts);
  for (const auto& t : d.triangles) {
    const auto in = oracle::conflicts(pts, oracle::site_of(pts, t[0]), oracle::site_of(pts, t[1]),
                                      oracle::site_of(pts, t[2]));
    CHECK(in.empty());
  }
  const auto h = d.hull.size();
  CHECK(d.triangles.size() == 2 * pts.size() - 2 - h);
}

TEST_CASE("flip oracle agrees with brute force on small sets") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 3 + rng() % 22;
    // Tiny ranges force many cocircular and collinear configurations.
    const auto pts = random_points(rng, n, t % 2 ? 3 : 1000);
    bool collinear = true;
    for (std::size_t i = 2; i < n && collinear; ++i) collinear = orient(pts[0], pts[1], pts[i]) == 0;
    if (collinear) continue;
    REQUIRE(oracle::delaunay(pts).triangles == oracle::delaunay_brute_force(pts));
  }
}

TEST_CASE("conflict counts at the extremes") {
  std::vector<Point> far{{0, 0}, {1000, 0}, {0, 1000}, {5000, 5000}, {-4000, 9000}};
  CHECK(oracle::conflicts(far, oracle::site_of(far, 0), oracle::site_of(far, 1),
                          oracle::site_of(far, 2))
            .empty());
  std::vector<Point> inside{{-100, -100}, {100, -100}, {0, 100}, {0, 0}, {1, 1}, {-2, 3}};
  CHECK(oracle::conflicts(inside, oracle::site_of(inside, 0), oracle::site_of(inside, 1),
                          oracle::site_of(inside, 2))
            .size() == 3);
}

TEST_CASE("hull cycles") {
  std::vector<Point> sq{{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}, {1, 0}};
  CHECK(oracle::hull(sq, false) == std::vector<std::uint32_t>{0, 3, 2, 1});
  CHECK(oracle::hull(sq, true) == std::vector<std::uint32_t>{0, 3, 2, 1, 5});
  std::vector<Point> line{{0, 0}, {3, 3}, {1, 1}};
  CHECK(oracle::hull(line, true) == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("validator accepts triangulations and rejects broken ones") {
  std::mt19937_64 rng(4);
  const auto pts = random_points(rng, 80, 50);
  const auto d = oracle::delaunay(pts);
  CHECK(validate::triangulation(pts, d.edges).ok);
  CHECK(validate::crossing_pairs(pts, d.edges) == 0);

  auto missing = d.edges;
  missing.pop_back();
  CHECK_FALSE(validate::triangulation(pts, missing).ok);

  // Swap one interior edge for a crossing one of the same count.
  std::vector<Point> sq{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  std::vector<oracle::Edge> good{{0, 1}, {1, 2}, {2, 3}, {0, 3}, {1, 3}};
  CHECK(validate::triangulation(sq, good).ok);
  std::vector<Point> kite{{0, 0}, {4, 0}, {4, 4}, {0, 4}, {1, 2}, {3, 2}};
  const auto kd = oracle::delaunay(kite);
  auto crossed = kd.edges;
  // Replace an edge from vertex 4 by a long edge crossing the middle.
  crossed.erase(std::find_if(crossed.begin(), crossed.end(),
                             [](auto e) { return e == oracle::Edge{4, 5}; }));
  crossed.push_back({0, 2});
  if (std::count(kd.edges.begin(), kd.edges.end(), oracle::Edge{0, 2}) == 0) {
    CHECK(validate::crossing_pairs(kite, crossed) > 0);
    CHECK_FALSE(validate::triangulation(kite, crossed).ok);
  }
}
