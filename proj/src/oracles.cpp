#include "cws/oracles.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

namespace cws::oracle {

namespace {

std::vector<std::uint32_t> lex_order(std::span<const Point> pts) {
  std::vector<std::uint32_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    return pts[a] < pts[b] || (pts[a] == pts[b] && a < b);
  });
  return idx;
}

}  // namespace

std::vector<std::uint32_t> hull(std::span<const Point> pts, bool include_collinear) {
  const auto idx = lex_order(pts);
  if (idx.size() <= 2) return idx;
  bool all_collinear = true;
  for (std::size_t i = 2; i < idx.size() && all_collinear; ++i)
    all_collinear = orient(pts[idx[0]], pts[idx[1]], pts[idx[i]]) == 0;
  if (all_collinear) return {idx.front(), idx.back()};

  auto chain = [&](int side) {
    std::vector<std::uint32_t> c;
    for (std::uint32_t i : idx) {
      while (c.size() >= 2) {
        const int o = orient(pts[c[c.size() - 2]], pts[c.back()], pts[i]) * side;
        if (o > 0 || (o == 0 && !include_collinear)) c.pop_back();
        else break;
      }
      c.push_back(i);
    }
    return c;
  };
  auto upper = chain(1);
  auto lower = chain(-1);
  std::vector<std::uint32_t> cycle = upper;
  for (std::size_t i = lower.size() - 1; i-- > 1;) cycle.push_back(lower[i]);
  return cycle;
}

std::vector<Edge> hull_edges(std::span<const Point> pts, bool include_collinear) {
  const auto c = hull(pts, include_collinear);
  std::vector<Edge> e;
  if (c.size() == 2) {
    e.push_back({c[0], c[1]});
    e.push_back({c[1], c[0]});
    return e;
  }
  for (std::size_t i = 0; i < c.size(); ++i) e.push_back({c[i], c[(i + 1) % c.size()]});
  return e;
}

NsPairs nsr_nsl(std::span<const i128> h) {
  NsPairs out;
  auto less = [&](std::size_t a, std::size_t b) { return h[a] < h[b] || (h[a] == h[b] && a < b); };
  std::vector<std::size_t> stack;
  for (std::size_t r = 0; r < h.size(); ++r) {
    while (!stack.empty() && less(r, stack.back())) {
      out.nsr.push_back({std::uint32_t(stack.back()), std::uint32_t(r)});
      stack.pop_back();
    }
    if (!stack.empty()) out.nsl.push_back({std::uint32_t(stack.back()), std::uint32_t(r)});
    stack.push_back(r);
  }
  std::sort(out.nsr.begin(), out.nsr.end());
  std::sort(out.nsl.begin(), out.nsl.end());
  return out;
}

std::vector<i128> mountain_heights(std::span<const Point> chain) {
  std::vector<i128> h(chain.size(), 0);
  if (chain.size() < 3) return h;
  for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
    const i128 d = orient_det(chain.front(), chain.back(), chain[i]);
    h[i] = d < 0 ? -d : d;
  }
  return h;
}

Triangle canonical(Triangle t) {
  while (t[0] > t[1] || t[0] > t[2]) t = {t[1], t[2], t[0]};
  return t;
}

Diagram delaunay(std::span<const Point> pts) {
  const auto idx = lex_order(pts);
  if (pts.size() < 3) throw Error(ErrorKind::degenerate_input, "fewer than three points");

  std::vector<Triangle> tris;
  // Plane sweep: each new point sees a suffix of the upper and lower chains.
  std::vector<std::uint32_t> up{idx[0]}, lo{idx[0]};
  for (std::size_t k = 1; k < idx.size(); ++k) {
    const std::uint32_t p = idx[k];
    while (up.size() >= 2 && orient(pts[up[up.size() - 2]], pts[up.back()], pts[p]) > 0) {
      tris.push_back({up[up.size() - 2], up.back(), p});
      up.pop_back();
    }
    while (lo.size() >= 2 && orient(pts[lo[lo.size() - 2]], pts[lo.back()], pts[p]) < 0) {
      tris.push_back({lo.back(), lo[lo.size() - 2], p});
      lo.pop_back();
    }
    up.push_back(p);
    lo.push_back(p);
  }
  if (tris.empty()) throw Error(ErrorKind::degenerate_input, "all points collinear");

  // Lawson flips until every interior edge is locally Delaunay.
  auto key = [](std::uint32_t a, std::uint32_t b) { return (std::uint64_t(a) << 32) | b; };
  std::unordered_map<std::uint64_t, std::uint32_t> owner;  // directed edge -> triangle
  owner.reserve(tris.size() * 4);
  for (std::uint32_t t = 0; t < tris.size(); ++t)
    for (int e = 0; e < 3; ++e) owner[key(tris[t][e], tris[t][(e + 1) % 3])] = t;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> todo;
  for (const auto& t : tris)
    for (int e = 0; e < 3; ++e) todo.push_back({t[e], t[(e + 1) % 3]});
  auto third = [](const Triangle& t, std::uint32_t a, std::uint32_t b) {
    for (std::uint32_t v : t)
      if (v != a && v != b) return v;
    return t[0];
  };
  while (!todo.empty()) {
    auto [a, b] = todo.back();
    todo.pop_back();
    auto i1 = owner.find(key(a, b));
    auto i2 = owner.find(key(b, a));
    if (i1 == owner.end() || i2 == owner.end()) continue;
    const std::uint32_t t1 = i1->second, t2 = i2->second;
    const std::uint32_t c = third(tris[t1], a, b), d = third(tris[t2], a, b);
    if (incircle_sos(site_of(pts, a), site_of(pts, b), site_of(pts, c), site_of(pts, d)) <= 0)
      continue;
    for (int e = 0; e < 3; ++e) {
      owner.erase(key(tris[t1][e], tris[t1][(e + 1) % 3]));
      owner.erase(key(tris[t2][e], tris[t2][(e + 1) % 3]));
    }
    tris[t1] = {a, d, c};
    tris[t2] = {d, b, c};
    for (std::uint32_t t : {t1, t2})
      for (int e = 0; e < 3; ++e) owner[key(tris[t][e], tris[t][(e + 1) % 3])] = t;
    todo.push_back({a, d});
    todo.push_back({d, b});
    todo.push_back({b, c});
    todo.push_back({c, a});
  }

  Diagram out;
  for (auto& t : tris) {
    out.triangles.push_back(canonical(t));
    std::array<std::uint32_t, 3> s = t;
    std::sort(s.begin(), s.end());
    out.vertices.push_back({s, circumcenter(pts[t[0]], pts[t[1]], pts[t[2]])});
    for (int e = 0; e < 3; ++e) {
      std::uint32_t u = t[e], v = t[(e + 1) % 3];
      if (u > v) std::swap(u, v);
      out.edges.push_back({u, v});
    }
  }
  std::sort(out.triangles.begin(), out.triangles.end());
  std::sort(out.vertices.begin(), out.vertices.end());
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  out.hull = hull(pts, true);
  return out;
}

std::vector<Triangle> delaunay_brute_force(std::span<const Point> pts) {
  const std::uint32_t n = static_cast<std::uint32_t>(pts.size());
  std::vector<Triangle> out;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = a + 1; b < n; ++b)
      for (std::uint32_t c = b + 1; c < n; ++c) {
        const int o = orient(pts[a], pts[b], pts[c]);
        if (o == 0) continue;
        Triangle t = o > 0 ? Triangle{a, b, c} : Triangle{a, c, b};
        bool empty = true;
        for (std::uint32_t d = 0; d < n && empty; ++d) {
          if (d == a || d == b || d == c) continue;
          empty = incircle_sos(site_of(pts, t[0]), site_of(pts, t[1]), site_of(pts, t[2]),
                               site_of(pts, d)) < 0;
        }
        if (empty) out.push_back(canonical(t));
      }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> conflicts(std::span<const Point> pts, const Site& a, const Site& b,
                                     const Site& c) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < pts.size(); ++i) {
    if (i == a.id || i == b.id || i == c.id) continue;
    if (incircle_sos(a, b, c, site_of(pts, i)) > 0) out.push_back(i);
  }
  return out;
}

}  // namespace cws::oracle

namespace cws::validate {

namespace {

// Half-plane then cross product: a total angular order of directions.
bool angle_less(const Point& u, const Point& v) {
  auto half = [](const Point& d) { return d.y > 0 || (d.y == 0 && d.x > 0) ? 0 : 1; };
  const int hu = half(u), hv = half(v);
  if (hu != hv) return hu < hv;
  return i128(u.x) * v.y - i128(u.y) * v.x > 0;
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

}  // namespace

std::size_t crossing_pairs(std::span<const Point> pts,
                           std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
  auto crosses = [&](std::size_t i, std::size_t j) {
    const auto [a, b] = edges[i];
    const auto [c, d] = edges[j];
    const Point &A = pts[a], &B = pts[b], &C = pts[c], &D = pts[d];
    if ((a == c && b == d) || (a == d && b == c)) return true;
    if (a == c || a == d || b == c || b == d) {
      // Overlap along a common ray.
      const std::uint32_t s = (a == c || a == d) ? a : b;
      const Point& S = pts[s];
      const Point& U = pts[s == a ? b : a];
      const Point& V = pts[(s == c) ? d : c];
      return orient(S, U, V) == 0 &&
             (i128(U.x - S.x) * (V.x - S.x) + i128(U.y - S.y) * (V.y - S.y)) > 0;
    }
    const int o1 = orient(A, B, C), o2 = orient(A, B, D);
    const int o3 = orient(C, D, A), o4 = orient(C, D, B);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    return (o1 == 0 && on_segment(A, B, C)) || (o2 == 0 && on_segment(A, B, D)) ||
           (o3 == 0 && on_segment(C, D, A)) || (o4 == 0 && on_segment(C, D, B));
  };
  // Every pair whose closed bounding boxes meet is tested; the others
  // cannot share a point.
  struct Box {
    std::int64_t x0, x1, y0, y1;
  };
  std::vector<Box> box(edges.size());
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Point& p = pts[edges[i].first];
    const Point& q = pts[edges[i].second];
    box[i] = {std::min(p.x, q.x), std::max(p.x, q.x), std::min(p.y, q.y), std::max(p.y, q.y)};
    order[i] = i;
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return box[a].x0 < box[b].x0; });
  std::size_t bad = 0;
  std::vector<std::size_t> active;
  for (auto i : order) {
    std::erase_if(active, [&](std::size_t j) { return box[j].x1 < box[i].x0; });
    for (auto j : active)
      if (box[j].y0 <= box[i].y1 && box[i].y0 <= box[j].y1 && crosses(j, i)) ++bad;
    active.push_back(i);
  }
  return bad;
}

Report triangulation(std::span<const Point> pts,
                     std::span<const std::pair<std::uint32_t, std::uint32_t>> edges_in) {
  const std::size_t n = pts.size();
  auto fail = [](std::string m) { return Report{false, std::move(m)}; };
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (auto [u, v] : edges_in) {
    if (u == v || u >= n || v >= n) return fail("degenerate edge");
    edges.push_back({std::min(u, v), std::max(u, v)});
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    return fail("duplicate edge");

  const auto hull_cycle = oracle::hull(pts, true);
  const std::size_t h = hull_cycle.size();
  if (n >= 3 && edges.size() != 3 * n - 3 - h)
    return fail("edge count " + std::to_string(edges.size()) + " != 3n-3-h = " +
                std::to_string(3 * n - 3 - h));
  for (std::size_t i = 0; i < h; ++i) {
    std::uint32_t u = hull_cycle[i], v = hull_cycle[(i + 1) % h];
    if (u > v) std::swap(u, v);
    if (!std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v)))
      return fail("missing hull edge " + std::to_string(u) + "-" + std::to_string(v));
  }

  // Rotation system: neighbors in counterclockwise angular order.
  std::vector<std::vector<std::uint32_t>> nb(n);
  for (auto [u, v] : edges) {
    nb[u].push_back(v);
    nb[v].push_back(u);
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    if (nb[v].empty()) return fail("isolated point " + std::to_string(v));
    std::sort(nb[v].begin(), nb[v].end(), [&](std::uint32_t a, std::uint32_t b) {
      const Point da{pts[a].x - pts[v].x, pts[a].y - pts[v].y};
      const Point db{pts[b].x - pts[v].x, pts[b].y - pts[v].y};
      return angle_less(da, db);
    });
    for (std::size_t i = 0; i + 1 < nb[v].size(); ++i) {
      const Point da{pts[nb[v][i]].x - pts[v].x, pts[nb[v][i]].y - pts[v].y};
      const Point db{pts[nb[v][i + 1]].x - pts[v].x, pts[nb[v][i + 1]].y - pts[v].y};
      if (!angle_less(da, db)) return fail("overlapping edges at " + std::to_string(v));
    }
  }
  auto position = [&](std::uint32_t v, std::uint32_t u) {
    return static_cast<std::size_t>(std::find(nb[v].begin(), nb[v].end(), u) - nb[v].begin());
  };

  std::map<std::pair<std::uint32_t, std::uint32_t>, bool> seen;
  std::size_t faces = 0, outer = 0;
  i128 area = 0;
  for (auto [a, b] : edges) {
    for (auto [u0, v0] : {std::make_pair(a, b), std::make_pair(b, a)}) {
      if (seen[{u0, v0}]) continue;
      std::vector<std::uint32_t> face;
      std::uint32_t u = u0, v = v0;
      while (!seen[{u, v}]) {
        seen[{u, v}] = true;
        face.push_back(u);
        const std::size_t p = position(v, u);
        const std::uint32_t w = nb[v][(p + nb[v].size() - 1) % nb[v].size()];
        u = v;
        v = w;
        if (face.size() > edges.size() * 2) return fail("face walk did not close");
      }
      ++faces;
      if (face.size() == 3 && orient(pts[face[0]], pts[face[1]], pts[face[2]]) > 0) {
        area += orient_det(pts[face[0]], pts[face[1]], pts[face[2]]);
      } else {
        ++outer;
      }
    }
  }
  if (outer != 1) return fail(std::to_string(outer) + " faces are not ccw triangles");
  if (static_cast<long long>(n) - static_cast<long long>(edges.size()) +
          static_cast<long long>(faces) != 2)
    return fail("Euler relation violated");
  i128 hull_area = 0;
  for (std::size_t i = 0; i < h; ++i) {
    const Point& p = pts[hull_cycle[i]];
    const Point& q = pts[hull_cycle[(i + 1) % h]];
    hull_area += i128(q.x) * p.y - i128(p.x) * q.y;  // clockwise cycle
  }
  if (area != hull_area) return fail("triangle areas do not sum to the hull area");
  return {};
}

}  // namespace cws::validate
