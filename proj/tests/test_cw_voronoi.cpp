#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "cws/oracles.hpp"
#include "cws/voronoi.hpp"
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

struct Result {
  VoronoiStats stats;
  std::vector<EmittedVertex> vertices;
  std::vector<oracle::Edge> edges;
};

Result run(const std::vector<Point>& pts, std::size_t s, VoronoiEmit mode, std::uint64_t seed,
           WorkspaceBudget* budget = nullptr, const VoronoiConfig& cfg = {}) {
  ReadOnlyArray in(pts);
  OutputSink sink = OutputSink::collecting();
  Rng rng(seed);
  Result r;
  r.stats = voronoi(in, s, cfg, mode, rng, budget, sink);
  r.vertices = sink.vertices();
  std::sort(r.vertices.begin(), r.vertices.end());
  for (auto [a, b] : sink.edges()) r.edges.emplace_back(a, b);
  std::sort(r.edges.begin(), r.edges.end());
  return r;
}

}  // namespace

TEST_CASE("three sites give one vertex") {
  const std::vector<Point> pts{{0, 0}, {4, 0}, {0, 4}};
  const auto r = run(pts, 2, VoronoiEmit::vertices, 1);
  REQUIRE(r.vertices.size() == 1);
  CHECK(r.vertices[0].sites == std::array<std::uint32_t, 3>{0, 1, 2});
  CHECK(r.vertices[0].center == circumcenter(pts[0], pts[1], pts[2]));
}

TEST_CASE("vertices match the oracle") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 3 + rng() % 400;
    const std::int64_t range = t % 3 == 0 ? 12 : t % 3 == 1 ? 60 : 1 << 20;
    const auto pts = random_points(rng, n, range);
    const std::size_t s = 2 + rng() % 40;
    const auto want = oracle::delaunay(pts);
    const auto got = run(pts, s, VoronoiEmit::vertices, t);
    INFO("n=" << n << " s=" << s << " range=" << range);
    CHECK(got.vertices == want.vertices);
  }
}

TEST_CASE("delaunay edges match the oracle") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 3 + rng() % 400;
    const std::int64_t range = t % 3 == 0 ? 12 : t % 3 == 1 ? 60 : 1 << 20;
    const auto pts = random_points(rng, n, range);
    const std::size_t s = 2 + rng() % 40;
    const auto want = oracle::delaunay(pts);
    const auto got = run(pts, s, VoronoiEmit::delaunay, t);
    INFO("n=" << n << " s=" << s << " range=" << range);
    CHECK(std::adjacent_find(got.edges.begin(), got.edges.end()) == got.edges.end());
    CHECK(got.edges == want.edges);
  }
}

namespace {

std::vector<std::uint32_t> first_k(std::size_t k) {
  std::vector<std::uint32_t> ids(k);
  for (std::uint32_t i = 0; i < k; ++i) ids[i] = i;
  return ids;
}

std::int64_t dist2(const Point& a, const Point& b) {
  return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
}

}  // namespace

TEST_CASE("conflict counts match brute force") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const auto pts = random_points(rng, 200, t % 2 ? 15 : 1 << 20);
    const ReadOnlyArray in(pts);
    const auto sites = first_k(12 + t);
    SampleDiagram d(in, sites, nullptr);
    std::vector<std::vector<std::uint32_t>> strict(d.vertex_count()), closed(d.vertex_count());
    for (std::uint32_t i = 0; i < pts.size(); ++i) {
      d.for_each_conflict(i, pts[i], false, [&](std::uint32_t v) { strict[v].push_back(i); });
      d.for_each_conflict(i, pts[i], true, [&](std::uint32_t v) { closed[v].push_back(i); });
    }
    for (std::uint32_t v = 0; v < d.vertex_count(); ++v) {
      const auto tri = d.vertex_sites(v);
      // The flood reaches every conflicting vertex, so the lists are exact.
      std::vector<std::uint32_t> want_closed;
      for (std::uint32_t i = 0; i < pts.size(); ++i)
        if (incircle(tri[0].pt, tri[1].pt, tri[2].pt, SitePoint::finite(pts[i])) >= 0)
          want_closed.push_back(i);
      CHECK(closed[v] == want_closed);
      std::vector<std::uint32_t> want_strict;
      for (std::uint32_t i = 0; i < pts.size(); ++i)
        if (!d.is_site(i) && incircle_sos(tri[0], tri[1], tri[2], oracle::site_of(pts, i)) > 0)
          want_strict.push_back(i);
      CHECK(strict[v] == want_strict);
      if (d.vertex_finite(v)) {
        auto o = oracle::conflicts(pts, tri[0], tri[1], tri[2]);
        std::sort(o.begin(), o.end());
        CHECK(strict[v] == o);
      }
    }
  }
}

TEST_CASE("wedges tile the cells") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 20; ++t) {
    const std::int64_t range = t % 2 ? 10 : 1000;
    const auto pts = random_points(rng, 40, range);
    const ReadOnlyArray in(pts);
    const auto sites = first_k(5 + t);
    SampleDiagram d(in, sites, nullptr);
    std::uniform_int_distribution<std::int64_t> c(-2 * range, 2 * range);
    for (int q = 0; q < 100; ++q) {
      const Point p{c(rng), c(rng)};
      const HomPoint x = HomPoint::of(p);
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (auto i : sites) best = std::min(best, dist2(p, pts[i]));
      std::uint32_t first = KDelaunay::kNone;
      for (std::uint32_t w = 0; w < d.wedge_count(); ++w) {
        const bool in_w = d.wedge_contains(w, x);
        const bool nearest = dist2(p, d.dt().site(d.wedge_site(w)).pt.p) == best;
        if (in_w) CHECK(nearest);
        if (in_w && first == KDelaunay::kNone) first = w;
      }
      REQUIRE(first != KDelaunay::kNone);
      CHECK(d.locate_wedge(p) == first);
    }
  }
}

TEST_CASE("wedge corners cover every empty circle centered in the wedge") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0, 1);
  int checked = 0;
  for (int t = 0; checked < 1000; ++t) {
    const auto pts = random_points(rng, 30, 1000);
    const ReadOnlyArray in(pts);
    SampleDiagram d(in, first_k(8 + t % 10), nullptr);
    const auto w = static_cast<std::uint32_t>(rng() % d.wedge_count());
    const auto [vj, vk] = d.wedge_corners(w);
    if (!d.vertex_finite(vj) || !d.vertex_finite(vk)) continue;
    auto center = [&](std::uint32_t v) {
      const auto s = d.vertex_sites(v);
      const auto h = circumcenter_h(s[0].pt.p, s[1].pt.p, s[2].pt.p);
      const double cx = static_cast<double>(h.X) / static_cast<double>(h.W);
      const double cy = static_cast<double>(h.Y) / static_cast<double>(h.W);
      const double rx = cx - static_cast<double>(s[0].pt.p.x);
      const double ry = cy - static_cast<double>(s[0].pt.p.y);
      return std::array<double, 3>{cx, cy, std::hypot(rx, ry)};
    };
    const auto a = center(vj), b = center(vk);
    const Point r = d.dt().site(d.wedge_site(w)).pt.p;
    // Random point x of the wedge, random point q of the circle around x
    // through r; that circle holds no site, and q must lie in a corner circle.
    double l0 = u(rng), l1 = u(rng);
    if (l0 + l1 > 1) l0 = 1 - l0, l1 = 1 - l1;
    const double xx = r.x + l0 * (a[0] - r.x) + l1 * (b[0] - r.x);
    const double xy = r.y + l0 * (a[1] - r.y) + l1 * (b[1] - r.y);
    const double rad = std::hypot(xx - r.x, xy - r.y);
    const double ang = 2 * M_PI * u(rng), dist = rad * std::sqrt(u(rng));
    const double qx = xx + dist * std::cos(ang), qy = xy + dist * std::sin(ang);
    const double slack = 1e-9 * (1 + a[2] + b[2]);
    const bool covered = std::hypot(qx - a[0], qy - a[1]) <= a[2] + slack ||
                         std::hypot(qx - b[0], qy - b[1]) <= b[2] + slack;
    CHECK(covered);
    ++checked;
  }
}

TEST_CASE("budget stays within c (s + n/s)") {
  std::mt19937_64 rng(24);
  const VoronoiConfig cfg;
  for (std::size_t n : {256, 1024}) {
    const auto pts = random_points(rng, n, 1 << 20);
    for (std::size_t s : {16, 64, 256}) {
      const auto limit = static_cast<std::size_t>(cfg.c_words * static_cast<double>(s + n / s));
      WorkspaceBudget budget(limit);
      const auto r = run(pts, s, VoronoiEmit::vertices, s, &budget);
      CHECK(budget.peak() <= limit);
      CHECK(budget.current() == 0);
      CHECK(r.vertices == oracle::delaunay(pts).vertices);
    }
  }
}

TEST_CASE("same seed gives the same run") {
  std::mt19937_64 rng(25);
  const auto pts = random_points(rng, 500, 1 << 20);
  for (auto mode : {VoronoiEmit::vertices, VoronoiEmit::delaunay}) {
    ReadOnlyArray in(pts);
    OutputSink a = OutputSink::collecting(), b = OutputSink::collecting();
    Rng ra(77), rb(77);
    const auto sa = voronoi(in, 20, {}, mode, ra, nullptr, a);
    const auto sb = voronoi(in, 20, {}, mode, rb, nullptr, b);
    CHECK(a.vertices() == b.vertices());
    CHECK(a.edges() == b.edges());
    CHECK(sa.r2_size == sb.r2_size);
    CHECK(sa.scans == sb.scans);
  }
}

TEST_CASE("thresholds force restarts") {
  std::mt19937_64 rng(26);
  const auto pts = random_points(rng, 300, 1 << 20);
  ReadOnlyArray in(pts);
  OutputSink sink;
  Rng r(1);
  VoronoiConfig cfg;
  cfg.c_M = 0.01;
  cfg.max_restarts = 3;
  try {
    voronoi(in, 16, cfg, VoronoiEmit::vertices, r, nullptr, sink);
    FAIL("expected a retry limit");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::retry_limit);
  }
  CHECK(sink.emitted() == 0);
}

TEST_CASE("degenerate inputs are rejected") {
  OutputSink sink;
  Rng r(1);
  for (const auto& pts : {std::vector<Point>{{0, 0}, {1, 1}, {2, 2}, {5, 5}},
                          std::vector<Point>{{0, 0}, {1, 0}}}) {
    ReadOnlyArray in(pts);
    CHECK_THROWS_AS(voronoi(in, 2, {}, VoronoiEmit::vertices, r, nullptr, sink), Error);
  }
}

TEST_CASE("config file") {
  const auto path = std::filesystem::temp_directory_path() / "cws_voronoi_test.cfg";
  {
    std::ofstream f(path);
    f << "# calibrated\nc_M = 7\nalpha=3 # inline\n\nround_cap = 5\n";
  }
  const auto cfg = VoronoiConfig::load(path.string());
  CHECK(cfg.c_M == 7);
  CHECK(cfg.alpha == 3);
  CHECK(cfg.round_cap == 5);
  CHECK(cfg.c_T == VoronoiConfig{}.c_T);
  {
    std::ofstream f(path);
    f << "c_Q = 1\n";
  }
  CHECK_THROWS_AS(VoronoiConfig::load(path.string()), Error);
  std::filesystem::remove(path);
}
