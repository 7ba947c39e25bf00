#pragma once

// Seeded generators for property tests. All draws go through splitmix64 so
// results are identical across platforms and runs.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "ordlab/ordinal.hpp"

namespace testgen {

struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
  bool flip() { return next() & 1; }
};

// Random ordinal with exponents < exp_bound (a small natural) and
// coefficients in [1, max_coeff]; term count in [0, max_terms].
inline ordlab::Ordinal random_ordinal(Rng& rng, std::uint64_t exp_bound,
                                      std::uint64_t max_terms = 3,
                                      std::uint64_t max_coeff = 6) {
  using ordlab::Ordinal;
  std::uint64_t nterms = rng.below(max_terms + 1);
  std::vector<std::uint64_t> exps;
  for (std::uint64_t i = 0; i < nterms; ++i) exps.push_back(rng.below(exp_bound));
  std::sort(exps.begin(), exps.end(), std::greater<>());
  exps.erase(std::unique(exps.begin(), exps.end()), exps.end());
  std::vector<ordlab::OrdTerm> ts;
  for (auto e : exps)
    ts.push_back(ordlab::OrdTerm{Ordinal(e), ordlab::Nat(1 + rng.below(max_coeff))});
  return Ordinal::from_terms(std::move(ts));
}

}  // namespace testgen
