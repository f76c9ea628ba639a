#include "cws/geometry.hpp"

#include <algorithm>
#include <utility>

namespace cws {

namespace {

template <int A, int B>
KPoly<A + B> mul(const KPoly<A>& a, const KPoly<B>& b) {
  KPoly<A + B> r;
  for (int i = 0; i <= A; ++i) {
    if (a.c[i] == 0) continue;
    for (int j = 0; j <= B; ++j) r.c[i + j] += a.c[i] * b.c[j];
  }
  return r;
}

template <int A, int B>
KPoly<std::max(A, B)> add(const KPoly<A>& a, const KPoly<B>& b) {
  KPoly<std::max(A, B)> r;
  for (int i = 0; i <= A; ++i) r.c[i] += a.c[i];
  for (int i = 0; i <= B; ++i) r.c[i] += b.c[i];
  return r;
}

template <int A, int B>
KPoly<std::max(A, B)> sub(const KPoly<A>& a, const KPoly<B>& b) {
  KPoly<std::max(A, B)> r;
  for (int i = 0; i <= A; ++i) r.c[i] += a.c[i];
  for (int i = 0; i <= B; ++i) r.c[i] -= b.c[i];
  return r;
}

int sign(i128 v) { return (v > 0) - (v < 0); }

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

KPoly<1> site_x(const SitePoint& s) {
  switch (s.kind) {
    case SiteKind::finite: return {{s.p.x, 0}};
    case SiteKind::k1: return {{0, -1}};
    case SiteKind::k2: return {{0, 1}};
    case SiteKind::k3: return {{0, 0}};
  }
  return {};
}

KPoly<1> site_y(const SitePoint& s) {
  switch (s.kind) {
    case SiteKind::finite: return {{s.p.y, 0}};
    case SiteKind::k1: return {{0, -1}};
    case SiteKind::k2: return {{0, -1}};
    case SiteKind::k3: return {{0, 1}};
  }
  return {};
}

int compare_lex(const SitePoint& a, const SitePoint& b) {
  if (a.is_finite() && b.is_finite()) {
    if (a.p == b.p) return 0;
    return a.p < b.p ? -1 : 1;
  }
  int sx = sub(site_x(a), site_x(b)).sign_at_infinity();
  if (sx != 0) return sx;
  return sub(site_y(a), site_y(b)).sign_at_infinity();
}

i128 orient_det(const Point& a, const Point& b, const Point& c) {
  return i128(b.x - a.x) * (c.y - a.y) - i128(b.y - a.y) * (c.x - a.x);
}

int orient(const Point& a, const Point& b, const Point& c) {
  return sign(orient_det(a, b, c));
}

int orient(const SitePoint& a, const SitePoint& b, const SitePoint& c) {
  if (a.is_finite() && b.is_finite() && c.is_finite())
    return orient(a.p, b.p, c.p);
  auto ax = site_x(a), ay = site_y(a);
  auto dx1 = sub(site_x(b), ax), dy1 = sub(site_y(b), ay);
  auto dx2 = sub(site_x(c), ax), dy2 = sub(site_y(c), ay);
  return sub(mul(dx1, dy2), mul(dy1, dx2)).sign_at_infinity();
}

int incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
  const i128 adx = a.x - d.x, ady = a.y - d.y;
  const i128 bdx = b.x - d.x, bdy = b.y - d.y;
  const i128 cdx = c.x - d.x, cdy = c.y - d.y;
  const i128 alift = adx * adx + ady * ady;
  const i128 blift = bdx * bdx + bdy * bdy;
  const i128 clift = cdx * cdx + cdy * cdy;
  const i128 det = adx * (bdy * clift - blift * cdy) -
                   ady * (bdx * clift - blift * cdx) +
                   alift * (bdx * cdy - bdy * cdx);
  return sign(det);
}

int incircle(const SitePoint& a, const SitePoint& b, const SitePoint& c,
             const SitePoint& d) {
  if (a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite())
    return incircle(a.p, b.p, c.p, d.p);
  const auto dx = site_x(d), dy = site_y(d);
  auto row = [&](const SitePoint& s) {
    auto rx = sub(site_x(s), dx);
    auto ry = sub(site_y(s), dy);
    return std::make_tuple(rx, ry, add(mul(rx, rx), mul(ry, ry)));
  };
  auto [a1, a2, a3] = row(a);
  auto [b1, b2, b3] = row(b);
  auto [c1, c2, c3] = row(c);
  auto m1 = sub(mul(b2, c3), mul(b3, c2));
  auto m2 = sub(mul(b1, c3), mul(b3, c1));
  auto m3 = sub(mul(b1, c2), mul(b2, c1));
  auto det = add(sub(mul(a1, m1), mul(a2, m2)), mul(a3, m3));
  return det.sign_at_infinity();
}

Site k_site(int which) {
  switch (which) {
    case 0: return {SitePoint::k1(), kK1Id};
    case 1: return {SitePoint::k2(), kK2Id};
    default: return {SitePoint::k3(), kK3Id};
  }
}

int incircle_sos(const Site& a, const Site& b, const Site& c, const Site& d) {
  const int exact = incircle(a.pt, b.pt, c.pt, d.pt);
  if (exact != 0) return exact;
  // Lifting site m outward by eps moves the query inside (for a triangle
  // corner) exactly when the query's barycentric weight for m is positive.
  std::array<const Site*, 4> order{&a, &b, &c, &d};
  std::sort(order.begin(), order.end(),
            [](const Site* u, const Site* v) { return u->id < v->id; });
  for (const Site* m : order) {
    int s = 0;
    if (m == &d) return -1;
    if (m == &a) s = orient(d.pt, b.pt, c.pt);
    else if (m == &b) s = orient(a.pt, d.pt, c.pt);
    else s = orient(a.pt, b.pt, d.pt);
    if (s != 0) return s;
  }
  return -1;
}

Rational Rational::make(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  // Cross multiplication stays within 128 bits for circumcenter-sized values
  // only after reduction; fall back to long division comparison otherwise.
  i128 qa = a.num / a.den, qb = b.num / b.den;
  i128 ra = a.num % a.den, rb = b.num % b.den;
  if (ra < 0) { ra += a.den; --qa; }
  if (rb < 0) { rb += b.den; --qb; }
  if (qa != qb) return qa <=> qb;
  // Compare ra/a.den with rb/b.den, both in [0, 1), by continued fractions.
  i128 n1 = ra, d1 = a.den, n2 = rb, d2 = b.den;
  bool flip = false;
  while (true) {
    if (n1 == 0 || n2 == 0) {
      std::strong_ordering r = (n1 == 0 && n2 == 0) ? std::strong_ordering::equal
                               : (n1 == 0)          ? std::strong_ordering::less
                                                    : std::strong_ordering::greater;
      if (flip) r = 0 <=> r;
      return r;
    }
    // Compare reciprocals d1/n1 vs d2/n2 with the order flipped.
    flip = !flip;
    i128 q1 = d1 / n1, q2 = d2 / n2;
    i128 r1 = d1 % n1, r2 = d2 % n2;
    if (q1 != q2) {
      std::strong_ordering r = q1 <=> q2;
      if (flip) r = 0 <=> r;
      return r;
    }
    d1 = n1; n1 = r1;
    d2 = n2; n2 = r2;
  }
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                            : static_cast<unsigned __int128>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

std::string Rational::str() const { return to_string(num) + "/" + to_string(den); }

HomogeneousCenter circumcenter_h(const Point& a, const Point& b, const Point& c) {
  const i128 bx = b.x - a.x, by = b.y - a.y;
  const i128 cx = c.x - a.x, cy = c.y - a.y;
  i128 d = 2 * (bx * cy - by * cx);
  if (d == 0) throw CollinearSites();
  const i128 bl = bx * bx + by * by;
  const i128 cl = cx * cx + cy * cy;
  i128 ux = cy * bl - by * cl;
  i128 uy = bx * cl - cx * bl;
  HomogeneousCenter h{a.x * d + ux, a.y * d + uy, d};
  if (h.W < 0) {
    h.X = -h.X;
    h.Y = -h.Y;
    h.W = -h.W;
  }
  return h;
}

Circumcenter circumcenter(const Point& a, const Point& b, const Point& c) {
  const auto h = circumcenter_h(a, b, c);
  return {Rational::make(h.X, h.W), Rational::make(h.Y, h.W)};
}

}  // namespace cws
