#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "cws/workspace.hpp"

namespace cws {

/// Seedable generator: mt19937_64. Integers in [0, m) by rejection, so no
/// residue class is favoured.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}
  static std::uint64_t entropy_seed();

  std::uint64_t uniform(std::uint64_t m);
  std::uint64_t bits() { return gen_(); }
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

/// Draws distinct numbers from [0, n) one at a time. Only drawn numbers
/// that were not swapped out of range carry a stored replacement, so after
/// k draws at most k entries are held.
class ReplacementTree {
 public:
  ReplacementTree(std::uint64_t n, WorkspaceBudget* budget);

  std::uint64_t draw(Rng& rng);
  std::uint64_t rounds() const { return k_; }
  std::size_t stored() const { return rho_.size(); }

  /// Test hook: the unsampled numbers are exactly the unsampled low range
  /// plus the stored replacements. `drawn` lists every value returned so far.
  bool invariant_holds(const std::vector<std::uint64_t>& drawn) const;

 private:
  using Alloc = Metered<std::pair<const std::uint64_t, std::uint64_t>>;
  std::uint64_t value_at(std::uint64_t x) const;

  std::uint64_t n_;
  std::uint64_t k_ = 0;
  std::map<std::uint64_t, std::uint64_t, std::less<>, Alloc> rho_;
  WorkspaceGrant scalars_;
};

/// s distinct numbers of [0, n), every s-subset equally likely, in draw
/// order.
mvector<std::uint64_t> sample_distinct(std::uint64_t n, std::uint64_t s, Rng& rng,
                                       WorkspaceBudget* budget);

struct SampleSpec {
  std::uint64_t id = 0;
  std::uint64_t population = 0;
  std::uint64_t count = 0;  // clamped to population
};

struct SampleSet {
  std::uint64_t id = 0;
  mvector<std::uint64_t> indices;
};

/// One independent distinct sample per spec. Throws TooManySamples when the
/// clamped counts add up to more than max_total.
mvector<SampleSet> sample_many(const std::vector<SampleSpec>& specs, std::uint64_t max_total,
                               Rng& rng, WorkspaceBudget* budget);

}  // namespace cws
