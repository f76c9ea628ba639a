#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace cws {

using i128 = __int128;

/// Inputs are restricted to |x|, |y| <= 2^26 so that orientation and incircle
/// determinants are exact in 128-bit integer arithmetic.
inline constexpr std::int64_t kCoordLimit = std::int64_t{1} << 26;

struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;

  // Lexicographic (x, y) order; doubles as the shear perturbation that
  // removes the distinct-x assumption.
  friend constexpr auto operator<=>(const Point&, const Point&) = default;
};

inline bool in_coord_range(const Point& p) {
  return p.x >= -kCoordLimit && p.x <= kCoordLimit && p.y >= -kCoordLimit &&
         p.y <= kCoordLimit;
}

/// The three corners of the far-away bounding triangle K are
/// K1 = (-k, -k), K2 = (k, -k), K3 = (0, k), evaluated for k -> infinity.
/// K1, K2, K3 is counterclockwise and contains every finite point.
enum class SiteKind : std::uint8_t { finite, k1, k2, k3 };

struct SitePoint {
  SiteKind kind = SiteKind::finite;
  Point p{};

  static constexpr SitePoint finite(Point q) { return {SiteKind::finite, q}; }
  static constexpr SitePoint k1() { return {SiteKind::k1, {}}; }
  static constexpr SitePoint k2() { return {SiteKind::k2, {}}; }
  static constexpr SitePoint k3() { return {SiteKind::k3, {}}; }

  constexpr bool is_finite() const { return kind == SiteKind::finite; }
  friend constexpr bool operator==(const SitePoint&, const SitePoint&) = default;
};

/// Polynomial in the symbolic parameter k with 128-bit coefficients;
/// coefficient i multiplies k^i.
template <int Degree>
struct KPoly {
  std::array<i128, Degree + 1> c{};

  /// Sign for k -> infinity: the sign of the highest nonzero coefficient.
  int sign_at_infinity() const {
    for (int i = Degree; i >= 0; --i) {
      if (c[i] > 0) return 1;
      if (c[i] < 0) return -1;
    }
    return 0;
  }
};

/// Coordinates of a site as linear polynomials in k.
KPoly<1> site_x(const SitePoint& s);
KPoly<1> site_y(const SitePoint& s);

/// Lexicographic comparison of two sites in the limit k -> infinity.
int compare_lex(const SitePoint& a, const SitePoint& b);

int orient(const Point& a, const Point& b, const Point& c);
/// Sign of the orientation determinant; +1 means a, b, c turn counterclockwise.
int orient(const SitePoint& a, const SitePoint& b, const SitePoint& c);

/// The raw doubled signed area for finite points.
i128 orient_det(const Point& a, const Point& b, const Point& c);

int incircle(const Point& a, const Point& b, const Point& c, const Point& d);
/// +1 iff d lies strictly inside the circle through the counterclockwise
/// triple a, b, c; 0 when cocircular.
int incircle(const SitePoint& a, const SitePoint& b, const SitePoint& c,
             const SitePoint& d);

/// Site identity used for symbolic tie-breaking. Input points carry their
/// array index; the K corners carry ids larger than any input index.
using SiteId = std::uint32_t;
inline constexpr SiteId kK1Id = std::numeric_limits<SiteId>::max() - 2;
inline constexpr SiteId kK2Id = std::numeric_limits<SiteId>::max() - 1;
inline constexpr SiteId kK3Id = std::numeric_limits<SiteId>::max();

inline constexpr bool is_k_id(SiteId id) { return id >= kK1Id; }

struct Site {
  SitePoint pt;
  SiteId id = 0;
};

Site k_site(int which);  // 0, 1, 2 -> K1, K2, K3

/// Incircle with index-lexicographic symbolic perturbation: when the four
/// sites are exactly cocircular, the site with the smallest id is lifted
/// (pushed outward) by the largest infinitesimal. Never returns 0 for four
/// distinct sites with a, b, c counterclockwise.
int incircle_sos(const Site& a, const Site& b, const Site& c, const Site& d);

/// Exact rational number in lowest terms with a positive denominator.
struct Rational {
  i128 num = 0;
  i128 den = 1;

  static Rational make(i128 num, i128 den);
  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);
  std::string str() const;  // "num/den"
};

struct Circumcenter {
  Rational x;
  Rational y;
  friend bool operator==(const Circumcenter&, const Circumcenter&) = default;
  friend auto operator<=>(const Circumcenter&, const Circumcenter&) = default;
};

/// Homogeneous form of a circumcenter of finite points: (X / W, Y / W) with
/// W = 2 * orient_det(a, b, c) made positive.
struct HomogeneousCenter {
  i128 X = 0;
  i128 Y = 0;
  i128 W = 1;
};

class CollinearSites : public std::invalid_argument {
 public:
  CollinearSites() : std::invalid_argument("circumcenter of collinear sites") {}
};

HomogeneousCenter circumcenter_h(const Point& a, const Point& b, const Point& c);
Circumcenter circumcenter(const Point& a, const Point& b, const Point& c);

std::string to_string(i128 v);

}  // namespace cws
