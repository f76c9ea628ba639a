#include "cws/sampler.hpp"

#include <set>

namespace cws {

std::uint64_t Rng::entropy_seed() {
  std::random_device rd;
  return (std::uint64_t{rd()} << 32) ^ rd();
}

std::uint64_t Rng::uniform(std::uint64_t m) {
  if (m <= 1) return 0;
  // Accept the largest prefix of [0, 2^64) whose length is a multiple of m.
  const std::uint64_t spill = (~std::uint64_t{0} % m + 1) % m;
  const std::uint64_t accept_max = ~std::uint64_t{0} - spill;
  for (;;) {
    const std::uint64_t v = gen_();
    if (v <= accept_max) return v % m;
  }
}

ReplacementTree::ReplacementTree(std::uint64_t n, WorkspaceBudget* budget)
    : n_(n), rho_(Alloc(budget)), scalars_(budget, 4) {}

std::uint64_t ReplacementTree::value_at(std::uint64_t x) const {
  const auto it = rho_.find(x);
  return it == rho_.end() ? x : it->second;
}

std::uint64_t ReplacementTree::draw(Rng& rng) {
  if (k_ >= n_) throw Error(ErrorKind::too_many_samples, "population exhausted");
  // Live range is [0, last]; the number at `last` leaves the range this round.
  const std::uint64_t last = n_ - k_ - 1;
  const std::uint64_t x = rng.uniform(last + 1);
  const std::uint64_t out = value_at(x);
  if (x != last) rho_[x] = value_at(last);
  rho_.erase(last);
  ++k_;
  return out;
}

bool ReplacementTree::invariant_holds(const std::vector<std::uint64_t>& drawn) const {
  const std::set<std::uint64_t> taken(drawn.begin(), drawn.end());
  if (taken.size() != drawn.size() || drawn.size() != k_) return false;
  std::set<std::uint64_t> rest;
  for (std::uint64_t v = 0; v < n_; ++v)
    if (!taken.count(v)) rest.insert(v);
  std::set<std::uint64_t> live;
  for (std::uint64_t x = 0; x < n_ - k_; ++x) {
    if (!live.insert(value_at(x)).second) return false;
  }
  return live == rest;
}

mvector<std::uint64_t> sample_distinct(std::uint64_t n, std::uint64_t s, Rng& rng,
                                       WorkspaceBudget* budget) {
  mvector<std::uint64_t> out{Metered<std::uint64_t>(budget)};
  if (s > n) s = n;
  out.reserve(s);
  ReplacementTree tree(n, budget);
  for (std::uint64_t i = 0; i < s; ++i) out.push_back(tree.draw(rng));
  return out;
}

mvector<SampleSet> sample_many(const std::vector<SampleSpec>& specs, std::uint64_t max_total,
                               Rng& rng, WorkspaceBudget* budget) {
  std::uint64_t total = 0;
  for (const auto& sp : specs) total += std::min(sp.count, sp.population);
  if (total > max_total)
    throw Error(ErrorKind::too_many_samples,
                std::to_string(total) + " samples requested, at most " +
                    std::to_string(max_total) + " allowed");
  mvector<SampleSet> out{Metered<SampleSet>(budget)};
  out.reserve(specs.size());
  for (const auto& sp : specs)
    out.push_back({sp.id, sample_distinct(sp.population, std::min(sp.count, sp.population), rng,
                                          budget)});
  return out;
}

}  // namespace cws
