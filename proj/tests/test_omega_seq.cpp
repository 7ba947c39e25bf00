#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ordlab/omega_seq.hpp"
#include "support/set_gen.hpp"

using namespace ordlab;

namespace {
Ordinal W(std::uint64_t e, std::uint64_t c) { return mul(omega_pow(Ordinal(e)), Ordinal(c)); }
}

TEST_CASE("sequence shapes") {
  auto a = OmegaSeq::affine(Ordinal(), omega());
  CHECK(a.at(0) == omega());
  CHECK(a.at(3) == W(1, 4));
  CHECK(a.sup() == omega_pow(Ordinal(2)));

  auto p = OmegaSeq::powers(omega());
  CHECK(p.at(0) == omega());            // w^(w[0]) = w^1
  CHECK(p.at(2) == omega_pow(Ordinal(3)));
  CHECK(p.sup() == omega_pow(omega()));

  auto sh = OmegaSeq::shifted(W(3, 1), OmegaSeq::affine(Ordinal(), Ordinal(1)));
  CHECK(sh.at(0) == W(3, 1) + Ordinal(1));
  CHECK(sh.sup() == W(3, 1) + omega());
}

TEST_CASE("slot trace of a progression along w-blocks") {
  Carrier c = Carrier::ordinal(omega_pow(Ordinal(2)));
  // S = {w*n}: each block [w*k, w*(k+1)) holds exactly one point.
  SetExpr s(c, {AffImg{Ordinal(), omega(), Ordinal(1)}});
  auto tr = slot_trace(s, OmegaSeq::affine(Ordinal(), omega()));
  CHECK(tr.tail_all_finite());
  CHECK(!tr.tail_all_empty());
  for (std::uint64_t k = 0; k < tr.onset + 2 * tr.period; ++k) {
    Extent e = extent(tr.slot(k));
    CHECK(e.card == Card::Finite);
    CHECK(e.count == 1);
  }
  CHECK(is_empty_set(tr.infinite_slots()));
}

TEST_CASE("slot trace of a fat set") {
  Carrier c = Carrier::ordinal(omega_pow(Ordinal(2)));
  SetExpr s(c, {AffImg{Ordinal(), Ordinal(1), Ordinal(2)}});  // (0, w^2)
  auto tr = slot_trace(s, OmegaSeq::affine(Ordinal(), omega()));
  CHECK(!tr.tail_all_finite());
  SetExpr inf = tr.infinite_slots();
  for (std::uint64_t k = 0; k < 20; ++k) CHECK(member(inf, Ordinal(k)));
}

TEST_CASE("slot trace agrees with direct slicing") {
  testgen::Rng rng(51);
  Carrier c = Carrier::ordinal(omega_pow(Ordinal(3)));
  auto lam = OmegaSeq::affine(Ordinal(), W(2, 1));
  for (int i = 0; i < 40; ++i) {
    SetExpr s = testgen::random_ord_set(rng, c);
    SlotTrace tr = slot_trace(s, lam);
    for (std::uint64_t k = 0; k < tr.onset + 3 * tr.period + 4; ++k) {
      SetExpr direct = intersect_interval(s, lam.at(k), lam.at(k + 1), true, false);
      Extent a = extent(direct), b = extent(tr.slot(k));
      CHECK(a.card == b.card);
      if (a.card == Card::Finite) CHECK(a.count == b.count);
    }
  }
}

TEST_CASE("slot trace with power-shaped boundaries") {
  Carrier c = Carrier::ordinal(omega_pow(omega()));
  SetExpr s(c, {AffImg{Ordinal(), Ordinal(1), omega()}});  // (0, w^w)
  auto lam = OmegaSeq::powers(omega());
  SlotTrace tr = slot_trace(s, lam);
  CHECK(!tr.tail_all_finite());
  // A bounded set dies in the tail.
  SetExpr small(c, {AffImg{Ordinal(), Ordinal(1), Ordinal(2)}});
  SlotTrace tr2 = slot_trace(small, lam);
  CHECK(tr2.tail_all_empty());
}

TEST_CASE("membership pattern along a sequence") {
  Carrier c = Carrier::ordinal(omega_pow(Ordinal(2)));
  SetExpr evens(c, {AffImg{Ordinal(), W(1, 2), Ordinal(1)}});  // {w*2, w*4, ...}
  auto lam = OmegaSeq::affine(Ordinal(), omega());             // l_k = w*(k+1)
  auto pat = seq_membership_pattern(lam, evens);
  for (std::uint64_t k = 0; k < 24; ++k)
    CHECK(pat.at(k) == ((k + 1) % 2 == 0));
}

TEST_CASE("rebase round trip") {
  Carrier big = Carrier::ordinal(omega_pow(Ordinal(3)));
  Carrier small = Carrier::ordinal(omega_pow(Ordinal(2)));
  Ordinal base = W(2, 4);
  SetExpr s(big, {AffImg{base + omega(), Ordinal(1), Ordinal(1)}});
  SetExpr down = rebase_down(s, base, small);
  CHECK(member(down, omega() + Ordinal(3)));
  SetExpr up = rebase_up(down, base, big);
  testgen::Rng rng(52);
  for (const auto& x : testgen::sample_points(rng, big.top(), 30)) {
    bool want = member(s, x);
    CHECK(member(up, x) == want);
  }
}
