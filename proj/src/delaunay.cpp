#include "cws/delaunay.hpp"

namespace cws {

KDelaunay::KDelaunay(WorkspaceBudget* budget)
    : sites_(Metered<Site>(budget)),
      tris_(Metered<Tri>(budget)),
      incident_(Metered<std::uint32_t>(budget)),
      pending_(Metered<std::uint32_t>(budget)),
      scalars_(budget, 8) {
  for (int i = 0; i < 3; ++i) {
    sites_.push_back(k_site(i));
    incident_.push_back(kNone);
  }
  make(0, 1, 2);
  tris_[0].nb = {kNone, kNone, kNone};
}

void KDelaunay::reserve(std::size_t sites) {
  sites_.reserve(sites + 3);
  incident_.reserve(sites + 3);
  // The history averages just under 9 triangles per site; leave some slack
  // so a typical run never reallocates.
  tris_.reserve(10 * sites + 16);
}

std::uint32_t KDelaunay::make(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  const auto id = static_cast<std::uint32_t>(tris_.size());
  // Grow by a quarter rather than doubling; the old and new buffers are
  // both metered while the copy happens.
  if (tris_.size() == tris_.capacity()) tris_.reserve(tris_.size() + tris_.size() / 4 + 16);
  Tri t;
  t.v = {a, b, c};
  t.nb = {kNone, kNone, kNone};
  tris_.push_back(t);
  incident_[a] = incident_[b] = incident_[c] = id;
  return id;
}

void KDelaunay::relink(std::uint32_t o, std::uint32_t from, std::uint32_t to) {
  if (o == kNone) return;
  for (auto& x : tris_[o].nb)
    if (x == from) x = to;
}

void KDelaunay::retire(std::uint32_t t, std::initializer_list<std::uint32_t> kids) {
  Tri& x = tris_[t];
  x.alive = false;
  x.nb = {kNone, kNone, kNone};
  int i = 0;
  for (auto k : kids) x.nb[i++] = k;
}

bool KDelaunay::contains(const Tri& t, const SitePoint& q) const {
  for (int i = 0; i < 3; ++i)
    if (orient(sites_[t.v[i]].pt, sites_[t.v[(i + 1) % 3]].pt, q) < 0) return false;
  return true;
}

std::uint32_t KDelaunay::locate(const SitePoint& q) const {
  std::uint32_t t = 0;
  while (!tris_[t].alive) {
    const Tri& x = tris_[t];
    std::uint32_t next = kNone;
    for (auto c : x.nb) {
      if (c == kNone) break;
      if (contains(tris_[c], q)) {
        next = c;
        break;
      }
    }
    if (next == kNone) throw std::logic_error("point location fell outside the history");
    t = next;
  }
  return t;
}

std::uint32_t KDelaunay::insert(const Site& s) {
  const auto p = static_cast<std::uint32_t>(sites_.size());
  const std::uint32_t t = locate(s.pt);
  const Tri old = tris_[t];
  std::array<int, 3> o{};
  int zeros = 0, on = -1;
  for (int i = 0; i < 3; ++i) {
    // Edge opposite v[i].
    o[i] = orient(sites_[old.v[(i + 1) % 3]].pt, sites_[old.v[(i + 2) % 3]].pt, s.pt);
    if (o[i] == 0) {
      ++zeros;
      on = i;
    }
  }
  if (zeros >= 2) throw Error(ErrorKind::degenerate_input, "duplicate point");
  sites_.push_back(s);
  incident_.push_back(kNone);

  pending_.clear();
  if (zeros == 0) {
    const std::uint32_t a = old.v[0], b = old.v[1], c = old.v[2];
    const std::uint32_t t0 = make(a, b, p), t1 = make(b, c, p), t2 = make(c, a, p);
    tris_[t0].nb = {t1, t2, old.nb[2]};
    tris_[t1].nb = {t2, t0, old.nb[0]};
    tris_[t2].nb = {t0, t1, old.nb[1]};
    relink(old.nb[2], t, t0);
    relink(old.nb[0], t, t1);
    relink(old.nb[1], t, t2);
    retire(t, {t0, t1, t2});
    pending_.insert(pending_.end(), {t0, t1, t2});
  } else {
    const std::uint32_t a = old.v[on], u = old.v[(on + 1) % 3], w = old.v[(on + 2) % 3];
    const std::uint32_t tn = old.nb[on];
    if (tn == kNone) throw std::logic_error("point on the outer boundary");
    const Tri other = tris_[tn];
    const int da = corner(other, w);  // other = (d, w, u) up to rotation
    const std::uint32_t d = other.v[(da + 2) % 3];
    const std::uint32_t t_opp_w = old.nb[(on + 2) % 3], t_opp_u = old.nb[(on + 1) % 3];
    const std::uint32_t o_opp_u = other.nb[corner(other, u)];
    const std::uint32_t o_opp_w = other.nb[corner(other, w)];
    const std::uint32_t t0 = make(a, u, p), t1 = make(a, p, w), t2 = make(d, w, p),
                        t3 = make(d, p, u);
    tris_[t0].nb = {t3, t1, t_opp_w};
    tris_[t1].nb = {t2, t_opp_u, t0};
    tris_[t2].nb = {t1, t3, o_opp_u};
    tris_[t3].nb = {t0, o_opp_w, t2};
    relink(t_opp_w, t, t0);
    relink(t_opp_u, t, t1);
    relink(o_opp_u, tn, t2);
    relink(o_opp_w, tn, t3);
    retire(t, {t0, t1});
    retire(tn, {t2, t3});
    pending_.insert(pending_.end(), {t0, t1, t2, t3});
  }
  while (!pending_.empty()) {
    const std::uint32_t x = pending_.back();
    pending_.pop_back();
    if (tris_[x].alive) legalize(x, p);
  }
  return p;
}

// Checks the edge of t opposite the new site p and flips it if the site
// beyond lies inside the circle of t.
void KDelaunay::legalize(std::uint32_t t, std::uint32_t p) {
  const Tri x = tris_[t];
  const int pi = corner(x, p);
  const std::uint32_t a = x.v[(pi + 1) % 3], b = x.v[(pi + 2) % 3];
  const std::uint32_t o = x.nb[pi];
  if (o == kNone) return;
  const Tri y = tris_[o];
  const std::uint32_t d = y.v[(corner(y, a) + 1) % 3];  // y = (d, b, a) rotated
  if (incircle_sos(sites_[p], sites_[a], sites_[b], sites_[d]) <= 0) return;
  const std::uint32_t x_opp_a = x.nb[(pi + 1) % 3], x_opp_b = x.nb[(pi + 2) % 3];
  const std::uint32_t y_opp_a = y.nb[corner(y, a)], y_opp_b = y.nb[corner(y, b)];
  const std::uint32_t t0 = make(p, a, d), t1 = make(p, d, b);
  tris_[t0].nb = {y_opp_b, t1, x_opp_b};
  tris_[t1].nb = {y_opp_a, x_opp_a, t0};
  relink(y_opp_b, o, t0);
  relink(x_opp_b, t, t0);
  relink(y_opp_a, o, t1);
  relink(x_opp_a, t, t1);
  retire(t, {t0, t1});
  retire(o, {t0, t1});
  pending_.push_back(t0);
  pending_.push_back(t1);
}

}  // namespace cws
