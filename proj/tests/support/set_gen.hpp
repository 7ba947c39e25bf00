#pragma once

// Generators and sampling oracles for set-expression tests.

#include <vector>

#include "ordlab/set_expr.hpp"
#include "support/gen.hpp"

namespace testgen {

using namespace ordlab;

// Sample points of [0, top]: corners, small successors, multiples of powers.
inline std::vector<Ordinal> sample_points(Rng& rng, const Ordinal& top, std::size_t n) {
  std::vector<Ordinal> out;
  out.push_back(Ordinal());
  out.push_back(top);
  while (out.size() < n) {
    // Build a random ordinal <= top by truncating random CNF terms.
    Ordinal x = random_ordinal(rng, 5, 3, 5);
    while (x > top) {
      if (x.is_finite()) { x = Ordinal(rng.below(8)); break; }
      x = x.tail();
    }
    out.push_back(x);
  }
  return out;
}

// Random set over [0, top]: a few affine images and points.
inline SetExpr random_ord_set(Rng& rng, const Carrier& car, std::size_t max_atoms = 3) {
  const Ordinal& top = car.top();
  std::vector<Atom> atoms;
  std::size_t n = 1 + rng.below(max_atoms);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.below(4) == 0) {
      std::vector<Point> ps;
      for (auto& p : sample_points(rng, top, 1 + rng.below(3))) ps.push_back(Point(p));
      std::sort(ps.begin(), ps.end());
      ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
      atoms.push_back(Pts{std::move(ps)});
      continue;
    }
    // img(delta; gamma; beta) with delta + gamma*w^beta <= top.
    for (int tries = 0; tries < 40; ++tries) {
      Ordinal delta = sample_points(rng, top, 3)[2];
      Ordinal gamma = random_ordinal(rng, 3, 2, 3);
      if (gamma.is_zero()) gamma = Ordinal(1);
      Ordinal beta = Ordinal(1 + rng.below(3));
      if (rng.below(4) == 0) beta = omega_pow(Ordinal(1));
      Ordinal sup = delta + mul(gamma, omega_pow(beta));
      if (sup <= top) {
        atoms.push_back(AffImg{delta, gamma, beta});
        break;
      }
    }
  }
  return SetExpr(car, std::move(atoms));
}

}  // namespace testgen
