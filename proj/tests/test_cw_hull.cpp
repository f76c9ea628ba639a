#include <algorithm>
#include <random>
#include <set>

#include "cws/hull.hpp"
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

std::vector<oracle::Edge> run(const ReadOnlyArray& a, std::size_t s, HullOptions opt,
                              WorkspaceBudget* budget = nullptr) {
  HullCursor c(a, s, budget, opt);
  std::vector<oracle::Edge> out;
  while (auto e = c.next()) out.push_back({e->from, e->to});
  return out;
}

}  // namespace

TEST_CASE("square with a center point") {
  ReadOnlyArray a({{0, 0}, {4, 0}, {4, 4}, {0, 4}, {2, 2}});
  for (std::size_t s : {1, 2, 8}) {
    const auto e = run(a, s, {});
    CHECK(e == std::vector<oracle::Edge>{{0, 3}, {3, 2}, {2, 1}, {1, 0}});
  }
}

TEST_CASE("convex position matches the oracle cycle") {
  std::mt19937_64 rng(1);
  std::vector<Point> pts;
  std::set<Point> seen;
  std::uniform_real_distribution<double> ang(0, 6.283185307179586);
  while (pts.size() < 64) {
    const double t = ang(rng);
    Point p{std::int64_t(std::llround(1e6 * std::cos(t))), std::int64_t(std::llround(1e6 * std::sin(t)))};
    if (seen.insert(p).second) pts.push_back(p);
  }
  ReadOnlyArray a(pts);
  const auto expect = oracle::hull_edges(pts, false);
  for (std::size_t s : {1, 4, 16, 64}) CHECK(run(a, s, {}) == expect);
}

TEST_CASE("random instances in both collinear modes") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng() % (t < 900 ? 200 : 1024);
    const auto pts = random_points(rng, n, t % 3 == 0 ? 16 : (t % 3 == 1 ? 100 : 1 << 20));
    ReadOnlyArray a(pts);
    const std::size_t s = std::size_t{1} << (rng() % 8);
    for (bool inc : {false, true}) {
      if (n < 2) {
        CHECK(run(a, s, {inc, false}).empty());
        continue;
      }
      REQUIRE(run(a, s, {inc, false}) == oracle::hull_edges(pts, inc));
    }
  }
}

TEST_CASE("sorted variant") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    auto pts = random_points(rng, 2 + rng() % 300, t % 2 ? 20 : 1 << 16);
    std::sort(pts.begin(), pts.end());
    ReadOnlyArray a(pts);
    const std::size_t s = 1 + rng() % 40;
    for (bool inc : {false, true}) REQUIRE(run(a, s, {inc, true}) == oracle::hull_edges(pts, inc));
  }
  // A staircase with no three collinear points is entirely on the hull.
  std::vector<Point> stair;
  for (int i = 0; i < 20; ++i) stair.push_back({i, i * i});
  ReadOnlyArray a(stair);
  CHECK(run(a, 3, {false, true}).size() == 20);
}

TEST_CASE("unsorted input is detected lazily") {
  ReadOnlyArray a({{0, 0}, {3, 1}, {1, 5}, {4, 0}, {2, 2}});
  CHECK_THROWS_AS(run(a, 1, {false, true}), Error);
}

TEST_CASE("collinear input reports the segment twice") {
  ReadOnlyArray a({{2, 2}, {0, 0}, {5, 5}, {1, 1}});
  CHECK(run(a, 1, {}) == std::vector<oracle::Edge>{{1, 2}, {2, 1}});
}

TEST_CASE("interleaved cursors are unaffected by pausing") {
  std::mt19937_64 rng(4);
  const auto pts = random_points(rng, 400, 1000);
  ReadOnlyArray a(pts);
  HullCursor c1(a, 4, nullptr), c2(a, 4, nullptr);
  std::vector<oracle::Edge> e1, e2;
  bool d1 = false, d2 = false;
  while (!d1 || !d2) {
    if (rng() % 2 && !d1) {
      if (auto e = c1.next()) e1.push_back({e->from, e->to});
      else d1 = true;
    } else if (!d2) {
      if (auto e = c2.next()) e2.push_back({e->from, e->to});
      else d2 = true;
    }
  }
  CHECK(e1 == e2);
  CHECK(e1 == oracle::hull_edges(pts, false));
}

TEST_CASE("reads fall as the workspace grows") {
  std::mt19937_64 rng(5);
  const auto pts = random_points(rng, 1000, 1 << 20);
  std::vector<oracle::Edge> first;
  std::uint64_t prev = ~std::uint64_t{0};
  for (std::size_t s : {8, 32, 128}) {
    ReadOnlyArray a(pts);
    WorkspaceBudget budget(64 * s + 256);
    const auto e = run(a, s, {}, &budget);
    if (first.empty()) first = e;
    CHECK(e == first);
    CHECK(a.reads() < prev);
    prev = a.reads();
    CHECK(budget.peak() <= 64 * s + 256);
  }
}
