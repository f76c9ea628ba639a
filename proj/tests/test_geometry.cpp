#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "cws/geometry.hpp"
#include "doctest.h"

using namespace cws;
using big = boost::multiprecision::cpp_int;

namespace {

// Concrete coordinates of a site for one numeric kappa.
std::pair<big, big> concrete(const SitePoint& s, const big& kappa) {
  switch (s.kind) {
    case SiteKind::finite: return {big(s.p.x), big(s.p.y)};
    case SiteKind::k1: return {-kappa, -kappa};
    case SiteKind::k2: return {kappa, -kappa};
    case SiteKind::k3: return {big(0), kappa};
  }
  return {};
}

big from128(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                            : static_cast<unsigned __int128>(v);
  big r = big(static_cast<std::uint64_t>(u >> 64));
  r <<= 64;
  r += big(static_cast<std::uint64_t>(u));
  return neg ? big(-r) : r;
}

int sgn(const big& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

int orient_num(const SitePoint& a, const SitePoint& b, const SitePoint& c, const big& k) {
  auto [ax, ay] = concrete(a, k);
  auto [bx, by] = concrete(b, k);
  auto [cx, cy] = concrete(c, k);
  return sgn((bx - ax) * (cy - ay) - (by - ay) * (cx - ax));
}

int incircle_num(const SitePoint& a, const SitePoint& b, const SitePoint& c,
                 const SitePoint& d, const big& k) {
  auto [ax, ay] = concrete(a, k);
  auto [bx, by] = concrete(b, k);
  auto [cx, cy] = concrete(c, k);
  auto [dx, dy] = concrete(d, k);
  big a1 = ax - dx, a2 = ay - dy, b1 = bx - dx, b2 = by - dy, c1 = cx - dx, c2 = cy - dy;
  big a3 = a1 * a1 + a2 * a2, b3 = b1 * b1 + b2 * b2, c3 = c1 * c1 + c2 * c2;
  big det = a1 * (b2 * c3 - b3 * c2) - a2 * (b1 * c3 - b3 * c1) + a3 * (b1 * c2 - b2 * c1);
  return sgn(det);
}

SitePoint random_site(std::mt19937_64& rng, bool allow_k) {
  std::uniform_int_distribution<int> kind(0, 5);
  std::uniform_int_distribution<std::int64_t> coord(-1024, 1024);
  int k = allow_k ? kind(rng) : 0;
  if (k == 1) return SitePoint::k1();
  if (k == 2) return SitePoint::k2();
  if (k == 3) return SitePoint::k3();
  return SitePoint::finite({coord(rng), coord(rng)});
}

}  // namespace

TEST_CASE("orient on finite points") {
  CHECK(orient(Point{0, 0}, Point{1, 0}, Point{0, 1}) == 1);
  CHECK(orient(Point{0, 0}, Point{1, 1}, Point{2, 2}) == 0);
  CHECK(orient(Point{0, 0}, Point{0, 1}, Point{1, 0}) == -1);
}

TEST_CASE("orient with bounding corners matches large kappa") {
  const SitePoint q = SitePoint::finite({5, 3});
  const int s = orient(SitePoint::k1(), SitePoint::k2(), q);
  CHECK(s == orient_num(SitePoint::k1(), SitePoint::k2(), q, big(1000000000)));
  // K is counterclockwise and every finite point lies inside it.
  CHECK(s == 1);
  CHECK(orient(SitePoint::k2(), SitePoint::k3(), q) == 1);
  CHECK(orient(SitePoint::k3(), SitePoint::k1(), q) == 1);
  CHECK(orient(SitePoint::k1(), SitePoint::k2(), SitePoint::k3()) == 1);
}

TEST_CASE("incircle examples") {
  const Point a{0, 0}, b{4, 0}, c{0, 4};
  CHECK(incircle(a, b, c, Point{1, 1}) == 1);
  CHECK(incircle(a, b, c, Point{4, 4}) == 0);
  CHECK(incircle(a, b, c, Point{5, 5}) == -1);
  CHECK(incircle(SitePoint::finite(a), SitePoint::finite(b), SitePoint::finite(c),
                 SitePoint::k3()) == -1);
}

TEST_CASE("incircle is exact at the coordinate limit") {
  const std::int64_t L = kCoordLimit;
  const Point a{-L, -L}, b{L, -L}, c{L, L};
  CHECK(incircle(a, b, c, Point{-L, L}) == 0);
  CHECK(incircle(a, b, c, Point{-L + 1, L}) == 1);
  CHECK(incircle(a, b, c, Point{-L, L + 1}) == -1);
}

TEST_CASE("incircle antisymmetry under swaps") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> coord(-kCoordLimit, kCoordLimit);
  for (int t = 0; t < 20000; ++t) {
    Point p[4];
    for (auto& q : p) q = {coord(rng), coord(rng)};
    const int s = incircle(p[0], p[1], p[2], p[3]);
    CHECK(incircle(p[1], p[0], p[2], p[3]) == -s);
    CHECK(incircle(p[0], p[2], p[1], p[3]) == -s);
    CHECK(incircle(p[2], p[1], p[0], p[3]) == -s);
  }
}

TEST_CASE("symbolic predicates agree with kappa = 10^9") {
  std::mt19937_64 rng(11);
  const big kappa(1000000000);
  int mismatches = 0;
  for (int t = 0; t < 100000; ++t) {
    SitePoint s[4];
    for (auto& q : s) q = random_site(rng, true);
    if (orient(s[0], s[1], s[2]) != orient_num(s[0], s[1], s[2], kappa)) ++mismatches;
    if (incircle(s[0], s[1], s[2], s[3]) != incircle_num(s[0], s[1], s[2], s[3], kappa))
      ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("compare_lex with symbolic sites") {
  const SitePoint f = SitePoint::finite({100, -7});
  CHECK(compare_lex(SitePoint::k1(), f) == -1);
  CHECK(compare_lex(SitePoint::k2(), f) == 1);
  CHECK(compare_lex(SitePoint::k3(), f) == -1);
  CHECK(compare_lex(SitePoint::k3(), SitePoint::finite({-3, 0})) == 1);
  CHECK(compare_lex(SitePoint::k3(), SitePoint::k2()) == -1);
  CHECK(compare_lex(f, f) == 0);
  CHECK(compare_lex(SitePoint::finite({1, 2}), SitePoint::finite({1, 3})) == -1);
}

TEST_CASE("perturbed incircle breaks cocircular ties consistently") {
  // Unit square with ids 0..3 counterclockwise: exactly one diagonal is
  // locally Delaunay under the perturbation.
  const Site s0{SitePoint::finite({0, 0}), 0}, s1{SitePoint::finite({1, 0}), 1},
      s2{SitePoint::finite({1, 1}), 2}, s3{SitePoint::finite({0, 1}), 3};
  const int flip02 = incircle_sos(s0, s1, s2, s3);  // is s3 inside (0,1,2)?
  const int flip13 = incircle_sos(s1, s2, s3, s0);  // is s0 inside (1,2,3)?
  CHECK(flip02 != 0);
  CHECK(flip13 != 0);
  // The two triangulations: diagonal 0-2 is legal iff s3 is outside (0,1,2)
  // and s1 outside (2,3,0); diagonal 1-3 iff s0 outside (1,2,3) and s2
  // outside (3,0,1). Exactly one must be legal.
  const bool d02 = flip02 < 0 && incircle_sos(s2, s3, s0, s1) < 0;
  const bool d13 = flip13 < 0 && incircle_sos(s3, s0, s1, s2) < 0;
  CHECK(d02 != d13);
  CHECK(d13);
}

TEST_CASE("perturbed incircle is consistent across cyclic rotations") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> coord(-3, 3);
  std::uniform_int_distribution<std::uint32_t> id(0, 1000);
  for (int t = 0; t < 20000; ++t) {
    Point p[4];
    for (auto& q : p) q = {coord(rng), coord(rng)};
    if (orient(p[0], p[1], p[2]) <= 0) continue;
    bool dup = false;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) dup |= p[i] == p[j];
    if (dup) continue;
    Site s[4];
    for (int i = 0; i < 4; ++i) s[i] = {SitePoint::finite(p[i]), id(rng) * 4 + i};
    const int r = incircle_sos(s[0], s[1], s[2], s[3]);
    CHECK(r != 0);
    CHECK(incircle_sos(s[1], s[2], s[0], s[3]) == r);
    CHECK(incircle_sos(s[2], s[0], s[1], s[3]) == r);
  }
}

TEST_CASE("circumcenter examples") {
  auto c = circumcenter({0, 0}, {4, 0}, {0, 4});
  CHECK(c.x == Rational::make(2, 1));
  CHECK(c.y == Rational::make(2, 1));
  c = circumcenter({0, 0}, {2, 0}, {1, 5});
  CHECK(c.x == Rational::make(1, 1));
  CHECK(c.y == Rational::make(12, 5));
  CHECK(c.y.str() == "12/5");
  CHECK_THROWS_AS(circumcenter({0, 0}, {1, 1}, {2, 2}), CollinearSites);
}

TEST_CASE("circumcenter is equidistant") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> coord(-kCoordLimit, kCoordLimit);
  for (int t = 0; t < 2000; ++t) {
    Point p[3];
    for (auto& q : p) q = {coord(rng), coord(rng)};
    if (orient(p[0], p[1], p[2]) == 0) continue;
    const auto h = circumcenter_h(p[0], p[1], p[2]);
    REQUIRE(h.W > 0);
    auto d2 = [&](const Point& q) -> big {
      big dx = from128(h.X) - big(q.x) * from128(h.W);
      big dy = from128(h.Y) - big(q.y) * from128(h.W);
      return dx * dx + dy * dy;
    };
    CHECK(d2(p[0]) == d2(p[1]));
    CHECK(d2(p[1]) == d2(p[2]));
  }
}

TEST_CASE("rational ordering matches cross multiplication") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::int64_t> v(-(std::int64_t{1} << 62), std::int64_t{1} << 62);
  for (int t = 0; t < 20000; ++t) {
    i128 n1 = i128(v(rng)) * (t % 3 == 0 ? 1000003 : 1), d1 = v(rng);
    i128 n2 = i128(v(rng)), d2 = v(rng);
    if (t % 5 == 0) n2 = n1, d2 = d1 + (t % 2);
    if (d1 == 0 || d2 == 0) continue;
    const Rational a = Rational::make(n1, d1), b = Rational::make(n2, d2);
    const big lhs = from128(a.num) * from128(b.den), rhs = from128(b.num) * from128(a.den);
    const auto expect = lhs < rhs ? std::strong_ordering::less
                        : lhs > rhs ? std::strong_ordering::greater
                                    : std::strong_ordering::equal;
    CHECK((a <=> b) == expect);
  }
}

TEST_CASE("int128 formatting") {
  CHECK(to_string(i128(0)) == "0");
  CHECK(to_string(i128(-42)) == "-42");
  const i128 big_neg = -(i128(1) << 126);
  CHECK(to_string(big_neg) == "-85070591730234615865843651857942052864");
}
