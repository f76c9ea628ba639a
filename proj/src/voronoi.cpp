#include "cws/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "cws/hull.hpp"
#include "cws/mountain.hpp"
#include "cws/pipeline.hpp"

namespace cws {

namespace {

using Big = boost::multiprecision::int512_t;

Big big(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  Big r = static_cast<std::uint64_t>(u >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(u);
  return neg ? -r : r;
}

// Polynomial in the symbolic size k of the bounding triangle.
struct BigPoly {
  static constexpr int kTerms = 8;
  std::array<Big, kTerms> c{};

  static BigPoly of(const KPoly<1>& k) {
    BigPoly p;
    p.c[0] = big(k.c[0]);
    p.c[1] = big(k.c[1]);
    return p;
  }
  static BigPoly constant(i128 v) {
    BigPoly p;
    p.c[0] = big(v);
    return p;
  }
  friend BigPoly operator+(const BigPoly& a, const BigPoly& b) {
    BigPoly r;
    for (int i = 0; i < kTerms; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
  }
  friend BigPoly operator-(const BigPoly& a, const BigPoly& b) {
    BigPoly r;
    for (int i = 0; i < kTerms; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
  }
  friend BigPoly operator*(const BigPoly& a, const BigPoly& b) {
    BigPoly r;
    for (int i = 0; i < kTerms; ++i) {
      if (a.c[i] == 0) continue;
      for (int j = 0; i + j < kTerms; ++j)
        if (b.c[j] != 0) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
  }
  int sign() const {
    for (int i = kTerms - 1; i >= 0; --i)
      if (c[i] != 0) return c[i] > 0 ? 1 : -1;
    return 0;
  }
};

struct PolyCenter {
  BigPoly X, Y, W;
};

PolyCenter center_of(const SitePoint& a, const SitePoint& b, const SitePoint& c) {
  const BigPoly ax = BigPoly::of(site_x(a)), ay = BigPoly::of(site_y(a));
  const BigPoly bx = BigPoly::of(site_x(b)) - ax, by = BigPoly::of(site_y(b)) - ay;
  const BigPoly cx = BigPoly::of(site_x(c)) - ax, cy = BigPoly::of(site_y(c)) - ay;
  const BigPoly two = BigPoly::constant(2);
  const BigPoly d = two * (bx * cy - by * cx);
  const BigPoly b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  return {ax * d + (cy * b2 - by * c2), ay * d + (bx * c2 - cx * b2), d};
}

}  // namespace

namespace {

// Coordinates of the center and of x relative to r, as polynomials.
struct Relative {
  BigPoly A, B, xr, yr;
};

Relative relative(const Point& r, const SitePoint& a, const SitePoint& b, const SitePoint& c,
                  const HomPoint& x) {
  const PolyCenter v = center_of(a, b, c);
  const BigPoly rx = BigPoly::constant(r.x), ry = BigPoly::constant(r.y);
  return {v.X - rx * v.W, v.Y - ry * v.W, BigPoly::constant(x.X - i128{r.x} * x.W),
          BigPoly::constant(x.Y - i128{r.y} * x.W)};
}

}  // namespace

namespace {

using Wide = boost::multiprecision::int256_t;

Wide wide(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  Wide r = static_cast<std::uint64_t>(u >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(u);
  return neg ? -r : r;
}

bool all_finite(const SitePoint& a, const SitePoint& b, const SitePoint& c) {
  return a.kind == SiteKind::finite && b.kind == SiteKind::finite && c.kind == SiteKind::finite;
}

// Finite centers fit in i128; only the final products need more.
int finite_sign(const Point& r, const SitePoint& a, const SitePoint& b, const SitePoint& c,
                const HomPoint& x, bool dot) {
  const HomogeneousCenter v = circumcenter_h(a.p, b.p, c.p);
  const Wide A = wide(v.X - i128{r.x} * v.W), B = wide(v.Y - i128{r.y} * v.W);
  const Wide xr = wide(x.X - i128{r.x} * x.W), yr = wide(x.Y - i128{r.y} * x.W);
  const Wide d = dot ? A * xr + B * yr : A * yr - B * xr;
  return d > 0 ? 1 : d < 0 ? -1 : 0;
}

}  // namespace

int orient_to_center(const Point& r, const SitePoint& a, const SitePoint& b, const SitePoint& c,
                     const HomPoint& x) {
  if (all_finite(a, b, c)) return finite_sign(r, a, b, c, x, false);
  const Relative q = relative(r, a, b, c, x);
  return (q.A * q.yr - q.B * q.xr).sign();
}

int dot_to_center(const Point& r, const SitePoint& a, const SitePoint& b, const SitePoint& c,
                  const HomPoint& x) {
  if (all_finite(a, b, c)) return finite_sign(r, a, b, c, x, true);
  const Relative q = relative(r, a, b, c, x);
  return (q.A * q.xr + q.B * q.yr).sign();
}

// ---------------------------------------------------------------------------
// Config

VoronoiConfig VoronoiConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse, "cannot open config " + path);
  VoronoiConfig c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto eq = line.find('=');
    auto trim = [](std::string v) {
      const auto b = v.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      return v.substr(b, v.find_last_not_of(" \t\r") - b + 1);
    };
    if (trim(line).empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw Error(ErrorKind::parse, where + ": expected key=value");
    const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    double v = 0;
    std::istringstream vs(val);
    if (!(vs >> v) || !(vs >> std::ws).eof() || v <= 0)
      throw Error(ErrorKind::parse, where + ": bad value for " + key);
    if (key == "c_M") c.c_M = v;
    else if (key == "c_T") c.c_T = v;
    else if (key == "alpha") c.alpha = v;
    else if (key == "round_cap") c.round_cap = static_cast<std::size_t>(v);
    else if (key == "max_restarts") c.max_restarts = static_cast<std::size_t>(v);
    else if (key == "c_B") c.c_B = v;
    else if (key == "c_W") c.c_W = v;
    else if (key == "c_S") c.c_S = v;
    else if (key == "c_words") c.c_words = v;
    else throw Error(ErrorKind::parse, where + ": unknown key " + key);
  }
  if (c.c_M < 1 || c.c_T < 1 || c.alpha < 1)
    throw Error(ErrorKind::parse, path + ": c_M, c_T and alpha must be at least 1");
  return c;
}

// ---------------------------------------------------------------------------
// SampleDiagram

SampleDiagram::SampleDiagram(const ReadOnlyArray& input, std::span<const std::uint32_t> sites,
                             WorkspaceBudget* budget)
    : dt_(budget),
      live_(Metered<std::uint32_t>(budget)),
      slot_(Metered<std::uint32_t>(budget)),
      sorted_ids_(Metered<std::uint32_t>(budget)),
      wedge_site_(Metered<std::uint32_t>(budget)),
      wedge_tri_(Metered<std::uint32_t>(budget)),
      cell_begin_(Metered<std::uint32_t>(budget)),
      first_wedge_(Metered<std::uint32_t>(budget)),
      stamp_(Metered<std::uint32_t>(budget)),
      stack_(Metered<std::uint32_t>(budget)),
      scalars_(budget, 8) {
  dt_.reserve(sites.size());
  for (auto i : sites) dt_.insert({SitePoint::finite(input[i]), i});

  const auto& tris = dt_.triangles();
  slot_.assign(tris.size(), KDelaunay::kNone);
  std::size_t alive = 0, corners = 0;
  for (const auto& x : tris) {
    if (!x.alive) continue;
    ++alive;
    for (auto r : x.v) corners += !dt_.is_k(r);
  }
  live_.reserve(alive);
  wedge_site_.reserve(corners);
  wedge_tri_.reserve(corners);
  for (std::uint32_t t = 0; t < tris.size(); ++t) {
    if (!tris[t].alive) continue;
    slot_[t] = static_cast<std::uint32_t>(live_.size());
    live_.push_back(t);
  }
  sorted_ids_.assign(sites.begin(), sites.end());
  std::sort(sorted_ids_.begin(), sorted_ids_.end());
  stamp_.assign(live_.size(), 0);

  first_wedge_.assign(3 * live_.size(), KDelaunay::kNone);
  cell_begin_.assign(dt_.site_count() + 1, 0);
  for (std::uint32_t r = 0; r < dt_.site_count(); ++r) {
    cell_begin_[r] = static_cast<std::uint32_t>(wedge_site_.size());
    if (dt_.is_k(r)) continue;
    const std::uint32_t t0 = dt_.incident(r);
    std::uint32_t first = t0;
    for (std::uint32_t t = dt_.ccw_around(t0, r); t != t0; t = dt_.ccw_around(t, r))
      first = std::min(first, t);
    std::uint32_t t = first;
    do {
      first_wedge_[3 * slot_[t] + KDelaunay::corner(dt_.tri(t), r)] =
          static_cast<std::uint32_t>(wedge_site_.size());
      wedge_site_.push_back(r);
      wedge_tri_.push_back(t);
      t = dt_.ccw_around(t, r);
    } while (t != first);
  }
  cell_begin_[dt_.site_count()] = static_cast<std::uint32_t>(wedge_site_.size());
}

std::array<Site, 3> SampleDiagram::vertex_sites(std::uint32_t v) const {
  const auto& x = dt_.tri(live_[v]);
  return {dt_.site(x.v[0]), dt_.site(x.v[1]), dt_.site(x.v[2])};
}

bool SampleDiagram::vertex_finite(std::uint32_t v) const {
  const auto& x = dt_.tri(live_[v]);
  return !dt_.is_k(x.v[0]) && !dt_.is_k(x.v[1]) && !dt_.is_k(x.v[2]);
}

bool SampleDiagram::is_site(std::uint32_t i) const {
  return std::binary_search(sorted_ids_.begin(), sorted_ids_.end(), i);
}

std::pair<std::uint32_t, std::uint32_t> SampleDiagram::wedge_corners(std::uint32_t w) const {
  const std::uint32_t t = wedge_tri_[w];
  return {slot_[t], slot_[dt_.ccw_around(t, wedge_site_[w])]};
}

std::pair<std::uint32_t, std::uint32_t> SampleDiagram::wedges_at(std::uint32_t v,
                                                                 std::uint32_t r) const {
  const std::uint32_t t = live_[v];
  const std::uint32_t id = first_wedge_[3 * v + KDelaunay::corner(dt_.tri(t), r)];
  const std::uint32_t begin = cell_begin_[r], deg = cell_begin_[r + 1] - begin;
  return {begin + (id - begin + deg - 1) % deg, id};
}

int SampleDiagram::closer(const HomPoint& x, std::uint32_t a, std::uint32_t b) const {
  // Sign of |x - a|^2 - |x - b|^2, scaled by W > 0.
  const Point& pa = dt_.site(a).pt.p;
  const Point& pb = dt_.site(b).pt.p;
  const i128 lin = x.X * (pa.x - pb.x) + x.Y * (pa.y - pb.y);
  const i128 sq = i128{pa.x} * pa.x + i128{pa.y} * pa.y - i128{pb.x} * pb.x - i128{pb.y} * pb.y;
  const i128 d = x.W * sq - 2 * lin;
  return (d > 0) - (d < 0);
}

template <class Fn>
void SampleDiagram::for_each_neighbor(std::uint32_t r, Fn&& fn) const {
  const std::uint32_t t0 = dt_.incident(r);
  std::uint32_t t = t0;
  do {
    const auto& x = dt_.tri(t);
    const std::uint32_t q = x.v[(KDelaunay::corner(x, r) + 1) % 3];
    if (!dt_.is_k(q) && fn(q)) return;
    t = dt_.ccw_around(t, r);
  } while (t != t0);
}

bool SampleDiagram::wedge_contains(std::uint32_t w, const HomPoint& x, bool in_cell) const {
  const std::uint32_t r = wedge_site_[w];
  if (!in_cell) {
    bool inside = true;
    for_each_neighbor(r, [&](std::uint32_t q) {
      if (closer(x, q, r) < 0) inside = false;
      return !inside;
    });
    if (!inside) return false;
  }
  const Point& pr = dt_.site(r).pt.p;
  auto side = [&](std::uint32_t t) {
    const auto& tri = dt_.tri(t);
    return orient_to_center(pr, dt_.site(tri.v[0]).pt, dt_.site(tri.v[1]).pt,
                            dt_.site(tri.v[2]).pt, x);
  };
  const std::uint32_t t = wedge_tri_[w];
  const std::uint32_t u = dt_.ccw_around(t, r);
  if (side(t) < 0 || side(u) > 0) return false;
  // Cocircular neighbors share their center and the wedge is the segment
  // from r to it; the two side tests alone accept the whole line.
  const auto& tri = dt_.tri(t);
  const auto& nxt = dt_.tri(u);
  const std::uint32_t far = nxt.v[(KDelaunay::corner(nxt, r) + 2) % 3];
  if (incircle(dt_.site(tri.v[0]).pt, dt_.site(tri.v[1]).pt, dt_.site(tri.v[2]).pt,
               dt_.site(far).pt) != 0)
    return true;
  return dot_to_center(pr, dt_.site(tri.v[0]).pt, dt_.site(tri.v[1]).pt, dt_.site(tri.v[2]).pt,
                       x) >= 0;
}

std::uint32_t SampleDiagram::nearest_site(const HomPoint& x, std::uint32_t start) const {
  // Greedy descent over Delaunay neighbors reaches a nearest site.
  std::uint32_t r = start;
  for (bool moved = true; moved;) {
    moved = false;
    for_each_neighbor(r, [&](std::uint32_t q) {
      if (closer(x, q, r) < 0) {
        r = q;
        moved = true;
      }
      return moved;
    });
  }
  return r;
}

std::uint32_t SampleDiagram::owner(const HomPoint& x, std::uint32_t start) const {
  const std::uint32_t r = nearest_site(x, start);
  // Sites tied for nearest are connected through Delaunay edges.
  std::vector<std::uint32_t> tied{r};
  for (std::size_t i = 0; i < tied.size(); ++i) {
    for_each_neighbor(tied[i], [&](std::uint32_t q) {
      if (closer(x, q, tied[i]) == 0 && std::find(tied.begin(), tied.end(), q) == tied.end())
        tied.push_back(q);
      return false;
    });
  }
  std::uint32_t best = KDelaunay::kNone;
  for (auto q : tied)
    for (std::uint32_t w = cell_begin_[q]; w < cell_begin_[q + 1] && w < best; ++w)
      if (wedge_contains(w, x, true)) best = w;
  if (best == KDelaunay::kNone) throw std::logic_error("point outside every wedge");
  return best;
}

std::uint32_t SampleDiagram::locate_wedge(const Point& p) const {
  const auto& x = dt_.tri(dt_.locate(SitePoint::finite(p)));
  for (auto v : x.v)
    if (!dt_.is_k(v)) return owner(HomPoint::of(p), v);
  throw std::logic_error("diagram has no finite site");
}

// ---------------------------------------------------------------------------
// Driver

namespace {

enum class Outcome { ok, mass, excess, round_cap, overflow };

struct Candidate {
  std::uint32_t v = 0;
  std::uint64_t b = 0;
  std::uint64_t count = 0;
  double weight = 0;  // t_v log t_v
  bool good = false;
  mvector<std::uint32_t> sample;
};

class Run {
 public:
  Run(const ReadOnlyArray& input, std::size_t s, const VoronoiConfig& cfg, VoronoiEmit mode,
      Rng& rng, WorkspaceBudget* budget, OutputSink& sink, VoronoiStats& st)
      : in_(input),
        n_(input.size()),
        s_(std::min(std::max<std::size_t>(s, 1), input.size())),
        cfg_(cfg),
        mode_(mode),
        rng_(rng),
        budget_(budget),
        sink_(sink),
        st_(st),
        regs_(budget, 16) {}

  Outcome attempt() {
    mvector<std::uint32_t> r2{Metered<std::uint32_t>(budget_)};
    if (const Outcome o = sample_phases(r2); o != Outcome::ok) return o;
    shuffle(r2);
    st_.r2_size = r2.size();
    SampleDiagram d2(in_, r2, budget_);
    r2 = mvector<std::uint32_t>{Metered<std::uint32_t>(budget_)};
    return emit(d2);
  }

  void hull_edges() {
    HullCursor hull(in_, s_, budget_, {.include_collinear = true});
    while (auto e = hull.next())
      if (e->from < e->to) sink_.delaunay_edge(e->from, e->to);
  }

 private:
  template <class T>
  void shuffle(mvector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng_.uniform(i)]);
  }

  double t_of(std::uint64_t b) const {
    return static_cast<double>(b) * static_cast<double>(s_) / static_cast<double>(n_);
  }

  Outcome sample_phases(mvector<std::uint32_t>& r2) {
    mvector<std::uint32_t> r{Metered<std::uint32_t>(budget_)};
    {
      const auto drawn = sample_distinct(n_, s_, rng_, budget_);
      r.assign(drawn.begin(), drawn.end());
    }
    SampleDiagram d1(in_, r, budget_);

    mvector<std::uint64_t> b(d1.vertex_count(), 0, Metered<std::uint64_t>(budget_));
    const double limit = cfg_.c_M * static_cast<double>(n_);
    std::uint64_t mass = 0;
    ++st_.scans;
    for (std::uint32_t i = 0; i < n_; ++i) {
      d1.for_each_conflict(i, in_[i], false, [&](std::uint32_t v) {
        ++b[v];
        ++mass;
      });
      if (static_cast<double>(mass) > limit) return Outcome::mass;
    }
    double excess = 0;
    for (auto bv : b) {
      const double t = t_of(bv);
      if (t >= 2) excess += t * std::log2(t);
    }
    st_.conflict_mass = mass;
    st_.excess = excess;
    if (excess > cfg_.c_T * static_cast<double>(s_)) return Outcome::excess;

    mvector<Candidate> cand{Metered<Candidate>(budget_)};
    mvector<std::uint32_t> cand_of(d1.vertex_count(), KDelaunay::kNone,
                                   Metered<std::uint32_t>(budget_));
    for (std::uint32_t v = 0; v < b.size(); ++v) {
      const double t = t_of(b[v]);
      if (t < 2) continue;
      cand_of[v] = static_cast<std::uint32_t>(cand.size());
      const auto want = static_cast<std::uint64_t>(std::ceil(cfg_.alpha * t * std::log2(t)));
      cand.push_back({v, b[v], std::min(b[v], want), t * std::log2(t), false,
                      mvector<std::uint32_t>{Metered<std::uint32_t>(budget_)}});
    }
    b = mvector<std::uint64_t>{Metered<std::uint64_t>(budget_)};
    st_.bad_candidates = cand.size();
    st_.rounds = 0;
    st_.round_cap_hit = false;

    const auto held = static_cast<std::uint64_t>(cfg_.c_S * static_cast<double>(s_));
    // Later rounds split the whole sample allowance among the vertices
    // that are still bad, so their samples grow as their number falls.
    for (;;) {
      std::uint64_t all = 0;
      double weight = 0;
      std::size_t bad = 0;
      for (const auto& c : cand) {
        if (c.good) continue;
        ++bad;
        all += c.b;
        weight += c.weight;
      }
      if (bad == 0) break;
      if (st_.rounds == cfg_.round_cap) {
        // Give up on sampling: take whole conflict lists if they fit.
        st_.round_cap_hit = true;
        if (all > held) return Outcome::round_cap;
        for (auto& c : cand)
          if (!c.good) {
            c.count = c.b;
            ++st_.fallbacks;
          }
        collect(d1, cand, cand_of);
        break;
      }
      if (st_.rounds++ > 0) {
        for (auto& c : cand) {
          if (c.good) continue;
          const auto share = static_cast<std::uint64_t>(static_cast<double>(held) * c.weight / weight);
          c.count = std::min(c.b, std::max(c.count, share));
        }
      }
      collect(d1, cand, cand_of);
      verify(d1, cand, cand_of);
    }

    r2 = std::move(r);
    for (const auto& c : cand) r2.insert(r2.end(), c.sample.begin(), c.sample.end());
    std::sort(r2.begin(), r2.end());
    r2.erase(std::unique(r2.begin(), r2.end()), r2.end());
    return Outcome::ok;
  }

  // Draws the sample of every bad candidate and reads it in one scan.
  void collect(SampleDiagram& d1, mvector<Candidate>& cand,
               const mvector<std::uint32_t>& cand_of) {
    std::vector<SampleSpec> specs;
    for (std::uint32_t k = 0; k < cand.size(); ++k)
      if (!cand[k].good) specs.push_back({k, cand[k].b, cand[k].count});
    auto sets = sample_many(specs, std::numeric_limits<std::uint64_t>::max(), rng_, budget_);
    struct Cursor {
      std::uint64_t seen = 0;
      std::size_t next = 0;
      const mvector<std::uint64_t>* want = nullptr;
    };
    mvector<Cursor> cur(cand.size(), Cursor{}, Metered<Cursor>(budget_));
    for (auto& set : sets) {
      std::sort(set.indices.begin(), set.indices.end());
      cur[set.id].want = &set.indices;
      cand[set.id].sample.clear();
    }
    ++st_.scans;
    for (std::uint32_t i = 0; i < n_; ++i) {
      d1.for_each_conflict(i, in_[i], false, [&](std::uint32_t v) {
        const std::uint32_t k = cand_of[v];
        if (k == KDelaunay::kNone || cand[k].good) return;
        Cursor& c = cur[k];
        if (c.next < c.want->size() && (*c.want)[c.next] == c.seen) {
          cand[k].sample.push_back(i);
          ++c.next;
        }
        ++c.seen;
      });
    }
    // A sample of the whole conflict list leaves nothing in conflict.
    for (auto& c : cand)
      if (!c.good && c.count == c.b) c.good = true;
  }

  // A candidate is good when no triangle of its sample's diagram conflicts
  // with more than n/s of its conflict points.
  void verify(SampleDiagram& d1, mvector<Candidate>& cand,
              const mvector<std::uint32_t>& cand_of) {
    mvector<std::unique_ptr<SampleDiagram>> diag(cand.size(),
                                                 Metered<std::unique_ptr<SampleDiagram>>(budget_));
    std::vector<mvector<std::uint32_t>> counts;
    counts.reserve(cand.size());
    for (std::size_t k = 0; k < cand.size(); ++k) {
      counts.emplace_back(Metered<std::uint32_t>(budget_));
      if (cand[k].good) continue;
      diag[k] = std::make_unique<SampleDiagram>(in_, cand[k].sample, budget_);
      counts[k].assign(diag[k]->vertex_count(), 0);
    }
    ++st_.scans;
    for (std::uint32_t i = 0; i < n_; ++i) {
      const Point p = in_[i];
      d1.for_each_conflict(i, p, false, [&](std::uint32_t v) {
        const std::uint32_t k = cand_of[v];
        if (k == KDelaunay::kNone || !diag[k]) return;
        diag[k]->for_each_conflict(i, p, false, [&](std::uint32_t w) { ++counts[k][w]; });
      });
    }
    for (std::size_t k = 0; k < cand.size(); ++k) {
      if (!diag[k]) continue;
      cand[k].good = std::all_of(counts[k].begin(), counts[k].end(), [&](std::uint32_t c) {
        return std::uint64_t{c} * s_ < n_;
      });
    }
  }

  Outcome emit(SampleDiagram& d2) {
    const std::size_t wedges = d2.wedge_count();
    mvector<std::uint32_t> bound{Metered<std::uint32_t>(budget_)};
    {
      mvector<std::uint32_t> b2(d2.vertex_count(), 0, Metered<std::uint32_t>(budget_));
      ++st_.scans;
      for (std::uint32_t i = 0; i < n_; ++i)
        d2.for_each_conflict(i, in_[i], true, [&](std::uint32_t v) { ++b2[v]; });
      const double cap = cfg_.c_B * static_cast<double>(n_) / static_cast<double>(s_) + 8;
      bound.resize(wedges);
      for (std::uint32_t w = 0; w < wedges; ++w) {
        const auto [a, c] = d2.wedge_corners(w);
        bound[w] = 1 + b2[a] + b2[c];
        if (bound[w] > cap) return Outcome::overflow;
      }
    }
    st_.wedges = wedges;
    st_.max_wedge_set = 0;
    st_.total_wedge_set = 0;

    std::uint64_t batch_cap = static_cast<std::uint64_t>(cfg_.c_W * static_cast<double>(s_));
    for (auto b : bound) batch_cap = std::max<std::uint64_t>(batch_cap, b);

    auto batch_end = [&](std::uint32_t w0, std::uint64_t& sum) {
      std::uint32_t w1 = w0;
      sum = 0;
      while (w1 < wedges && sum + bound[w1] <= batch_cap) sum += bound[w1++];
      return w1;
    };
    // Reserve once for the largest batch so no buffer is ever held twice.
    std::uint64_t most_items = 0;
    std::uint32_t most_wedges = 0;
    for (std::uint32_t w0 = 0; w0 < wedges;) {
      std::uint64_t sum;
      const std::uint32_t w1 = batch_end(w0, sum);
      most_items = std::max(most_items, sum);
      most_wedges = std::max(most_wedges, w1 - w0);
      w0 = w1;
    }
    mvector<std::uint32_t> off{Metered<std::uint32_t>(budget_)};
    mvector<std::uint32_t> len{Metered<std::uint32_t>(budget_)};
    mvector<StreamItem> pool{Metered<StreamItem>(budget_)};
    off.reserve(most_wedges + 1);
    len.reserve(most_wedges);
    pool.reserve(most_items);
    for (std::uint32_t w0 = 0; w0 < wedges;) {
      std::uint64_t sum;
      const std::uint32_t w1 = batch_end(w0, sum);
      off.assign(w1 - w0 + 1, 0);
      len.assign(w1 - w0, 1);
      for (std::uint32_t w = w0; w < w1; ++w) off[w - w0 + 1] = off[w - w0] + bound[w];
      pool.assign(sum, StreamItem{});
      for (std::uint32_t w = w0; w < w1; ++w)
      {
        const Site& r = d2.dt().site(d2.wedge_site(w));
        pool[off[w - w0]] = {r.id, r.pt.p};
      }

      ++st_.scans;
      for (std::uint32_t i = 0; i < n_; ++i) {
        const Point p = in_[i];
        d2.for_each_conflict(i, p, true, [&](std::uint32_t v) {
          const auto& tri = d2.dt().tri(d2.vertex_triangle(v));
          for (auto r : tri.v) {
            if (d2.dt().is_k(r) || d2.dt().site(r).id == i) continue;
            const auto [wa, wb] = d2.wedges_at(v, r);
            for (auto w : {wa, wb}) {
              if (w < w0 || w >= w1) continue;
              const std::uint32_t j = w - w0;
              if (pool[off[j] + len[j] - 1].index == i) continue;
              if (len[j] == bound[w]) throw std::logic_error("wedge conflict bound exceeded");
              pool[off[j] + len[j]++] = {i, p};
            }
          }
        });
      }
      for (std::uint32_t w = w0; w < w1; ++w) {
        const std::uint32_t j = w - w0;
        emit_wedge(d2, w, std::span<StreamItem>(pool.data() + off[j], len[j]));
      }
      w0 = w1;
    }
    return Outcome::ok;
  }

  void emit_wedge(const SampleDiagram& d2, std::uint32_t w, std::span<StreamItem> pts) {
    st_.max_wedge_set = std::max(st_.max_wedge_set, pts.size());
    st_.total_wedge_set += pts.size();
    if (pts.size() < 3) return;
    for (std::size_t i = pts.size(); i > 1; --i) std::swap(pts[i - 1], pts[rng_.uniform(i)]);
    KDelaunay local(budget_);
    local.reserve(pts.size());
    for (const auto& it : pts) local.insert({SitePoint::finite(it.p), it.index});
    const std::uint32_t r = d2.wedge_site(w);
    for (const auto& t : local.triangles()) {
      if (!t.alive || local.is_k(t.v[0]) || local.is_k(t.v[1]) || local.is_k(t.v[2])) continue;
      const Site& a = local.site(t.v[0]);
      const Site& b = local.site(t.v[1]);
      const Site& c = local.site(t.v[2]);
      const HomogeneousCenter h = circumcenter_h(a.pt.p, b.pt.p, c.pt.p);
      const HomPoint x{h.X, h.Y, h.W};
      if (!d2.wedge_contains(w, x) || d2.owner(x, r) != w) continue;
      if (mode_ == VoronoiEmit::vertices) {
        std::array<std::uint32_t, 3> ids{a.id, b.id, c.id};
        std::sort(ids.begin(), ids.end());
        sink_.vertex(ids, circumcenter(a.pt.p, b.pt.p, c.pt.p));
        continue;
      }
      const std::array<const Site*, 3> v{&a, &b, &c};
      for (int k = 0; k < 3; ++k) {
        const Site* p = v[k];
        const Site* q = v[(k + 1) % 3];
        if (q->id < p->id) std::swap(p, q);
        // Each interior edge is reported by the triangle on its left.
        if (orient(p->pt.p, q->pt.p, v[(k + 2) % 3]->pt.p) > 0) sink_.delaunay_edge(p->id, q->id);
      }
    }
  }

  const ReadOnlyArray& in_;
  std::size_t n_;
  std::size_t s_;
  const VoronoiConfig& cfg_;
  VoronoiEmit mode_;
  Rng& rng_;
  WorkspaceBudget* budget_;
  OutputSink& sink_;
  VoronoiStats& st_;
  WorkspaceGrant regs_;
};

}  // namespace

VoronoiStats voronoi(const ReadOnlyArray& input, std::size_t s, const VoronoiConfig& cfg,
                     VoronoiEmit mode, Rng& rng, WorkspaceBudget* budget, OutputSink& sink) {
  VoronoiStats st;
  if (input.size() < 3) throw Error(ErrorKind::degenerate_input, "fewer than three points");
  reject_collinear(input);
  Run run(input, s, cfg, mode, rng, budget, sink, st);
  for (;;) {
    if (st.attempts > cfg.max_restarts)
      throw Error(ErrorKind::retry_limit, "sampling restarted " + std::to_string(st.attempts - 1) +
                                              " times");
    ++st.attempts;
    switch (run.attempt()) {
      case Outcome::ok:
        if (mode == VoronoiEmit::delaunay) run.hull_edges();
        return st;
      case Outcome::mass: ++st.restarts_mass; break;
      case Outcome::excess: ++st.restarts_excess; break;
      case Outcome::round_cap: ++st.restarts_round_cap; break;
      case Outcome::overflow: ++st.restarts_overflow; break;
    }
  }
}

}  // namespace cws
