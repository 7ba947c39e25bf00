#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ordlab/nat_sets.hpp"
#include "ordlab/set_expr.hpp"
#include "support/gen.hpp"

using namespace ordlab;

namespace {

SetExpr ap(std::uint64_t a, std::uint64_t d) {
  return SetExpr(Carrier::nat(), {NatAP{Nat(a), Nat(d)}});
}
SetExpr geo(std::uint64_t c, std::uint64_t q) {
  return SetExpr(Carrier::nat(), {NatGeo{Nat(c), Nat(q), EPSet::all()}});
}
SetExpr natpts(std::initializer_list<std::uint64_t> vs) {
  std::vector<Point> ps;
  for (auto v : vs) ps.push_back(Point(Ordinal(v)));
  return SetExpr::points(Carrier::nat(), std::move(ps));
}

// Pointwise oracle over a window, using only member() of the inputs.
void check_op_window(const SetExpr& a, const SetExpr& b, BoolOp op, std::uint64_t hi) {
  SetExpr r = boolean_nat(a, b, op);
  for (std::uint64_t v = 0; v <= hi; ++v) {
    bool ia = member(a, Ordinal(v));
    bool ib = member(b, Ordinal(v));
    bool want = op == BoolOp::Union ? (ia || ib) : op == BoolOp::Intersect ? (ia && ib) : (ia && !ib);
    CHECK(member(r, Ordinal(v)) == want);
  }
}

SetExpr random_nat_set(testgen::Rng& rng) {
  std::vector<Atom> atoms;
  std::size_t n = 1 + rng.below(3);
  for (std::size_t i = 0; i < n; ++i) {
    switch (rng.below(3)) {
      case 0: atoms.push_back(NatAP{Nat(rng.below(7)), Nat(1 + rng.below(5))}); break;
      case 1: {
        EPSet idx = rng.flip() ? EPSet::all() : EPSet::arithmetic(rng.below(3), 1 + rng.below(3));
        atoms.push_back(NatGeo{Nat(1 + rng.below(4)), Nat(2 + rng.below(3)), idx});
        break;
      }
      default: {
        std::vector<Point> ps;
        for (int k = 0; k < 3; ++k) ps.push_back(Point(Ordinal(rng.below(40))));
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
        atoms.push_back(Pts{std::move(ps)});
      }
    }
  }
  return SetExpr(Carrier::nat(), std::move(atoms));
}

}  // namespace

TEST_CASE("CRT intersection of progressions") {
  // ap(0;2) n ap(0;3) = ap(0;6)
  SetExpr r = boolean_nat(ap(0, 2), ap(0, 3), BoolOp::Intersect);
  for (std::uint64_t v = 0; v < 60; ++v)
    CHECK(member(r, Ordinal(v)) == (v % 6 == 0));
  // self difference empty
  CHECK(is_empty_set(boolean_nat(ap(0, 2), ap(0, 2), BoolOp::Diff)));
}

TEST_CASE("geo meets progression exactly") {
  // {2^n} n ap(0;3) is empty: 2^n is never divisible by 3. Oracle: exhaustive
  // scan past one full period of 2^n mod 3.
  SetExpr r = boolean_nat(geo(1, 2), ap(0, 3), BoolOp::Intersect);
  CHECK(is_empty_set(r));
  for (std::uint64_t n = 0; n < 20; ++n) CHECK((1ull << n) % 3 != 0);

  // {2^n} n ap(1;3): 2^n = 1 mod 3 iff n even.
  SetExpr r2 = boolean_nat(geo(1, 2), ap(1, 3), BoolOp::Intersect);
  for (std::uint64_t n = 0; n < 16; ++n)
    CHECK(member(r2, Ordinal(Nat(1) << n)) == (n % 2 == 0));
}

TEST_CASE("geo/geo intersections") {
  // same ratio, shifted constants: {2^n} n {8*2^m} = {8, 16, ...}
  SetExpr r = boolean_nat(geo(1, 2), geo(8, 2), BoolOp::Intersect);
  CHECK(!member(r, Ordinal(4)));
  CHECK(member(r, Ordinal(8)));
  CHECK(member(r, Ordinal(1024)));
  // different ratios: {2^n} n {3^m} = {1}
  SetExpr r2 = boolean_nat(geo(1, 2), geo(1, 3), BoolOp::Intersect);
  CHECK(member(r2, Ordinal(1)));
  CHECK(!member(r2, Ordinal(2)));
  CHECK(!member(r2, Ordinal(3)));
  Extent e = extent(r2);
  CHECK(e.card == Card::Finite);
  CHECK(e.count == 1);
  // multiplicatively dependent: {4^n} n {2^m} = {4^n} entirely
  SetExpr r3 = boolean_nat(geo(1, 4), geo(1, 2), BoolOp::Intersect);
  for (std::uint64_t n = 0; n < 10; ++n) CHECK(member(r3, Ordinal(Nat(1) << (2 * n))));
  CHECK(!member(r3, Ordinal(2)));
  CHECK(!member(r3, Ordinal(8)));
  // 2*6^n vs 3*4^m: single common value 12.
  SetExpr r4 = boolean_nat(geo(2, 6), geo(3, 4), BoolOp::Intersect);
  Extent e4 = extent(r4);
  CHECK(e4.card == Card::Finite);
  CHECK(e4.count == 1);
  CHECK(member(r4, Ordinal(12)));
}

TEST_CASE("difference with sparse holes stays exact") {
  // all naturals minus {2^n}: membership must exclude exactly the powers.
  SetExpr r = boolean_nat(SetExpr::full(Carrier::nat()), geo(1, 2), BoolOp::Diff);
  CHECK(r.has_holes());
  for (std::uint64_t v = 0; v < 300; ++v) {
    bool pow2 = v && (v & (v - 1)) == 0;
    CHECK(member(r, Ordinal(v)) == !pow2);
  }
  CHECK(is_infinite_set(r));
  // Second-round operations on holed sets stay pointwise-correct.
  SetExpr r2 = boolean_nat(r, ap(0, 2), BoolOp::Intersect);
  for (std::uint64_t v = 0; v < 200; ++v) {
    bool pow2 = v && (v & (v - 1)) == 0;
    CHECK(member(r2, Ordinal(v)) == (v % 2 == 0 && !pow2));
  }
  // And the holes can be filled back in.
  SetExpr r3 = boolean_nat(r, geo(1, 2), BoolOp::Union);
  for (std::uint64_t v = 0; v < 200; ++v) CHECK(member(r3, Ordinal(v)));
}

TEST_CASE("random boolean algebra agrees with pointwise oracle") {
  testgen::Rng rng(41);
  for (int i = 0; i < 120; ++i) {
    SetExpr a = random_nat_set(rng);
    SetExpr b = random_nat_set(rng);
    check_op_window(a, b, BoolOp::Union, 120);
    check_op_window(a, b, BoolOp::Intersect, 120);
    check_op_window(a, b, BoolOp::Diff, 120);
    // Chain once more with the results to exercise holes.
    SetExpr d = boolean_nat(a, b, BoolOp::Diff);
    check_op_window(d, b, BoolOp::Union, 120);
    check_op_window(d, a, BoolOp::Intersect, 120);
  }
}

TEST_CASE("choose progression dodges holes") {
  SetExpr r = boolean_nat(SetExpr::full(Carrier::nat()), geo(1, 2), BoolOp::Diff);
  SetExpr p = choose_progression(r);
  CHECK(order_type(p) == omega());
  auto first = enumerate_inorder(p, 12);
  for (const auto& x : first) {
    CHECK(member(r, x));
    Nat v = x.scalar().finite_value();
    bool pow2 = v > 0 && (v & (v - 1)) == 0;
    CHECK(!pow2);
  }
}

TEST_CASE("extent and enumeration of mixed sets") {
  SetExpr s = set_union(natpts({7, 9}), geo(5, 3));
  CHECK(is_infinite_set(s));
  auto first = enumerate_inorder(s, 5);
  CHECK(first[0].scalar() == Ordinal(5));
  CHECK(first[1].scalar() == Ordinal(7));
  CHECK(first[2].scalar() == Ordinal(9));
  CHECK(first[3].scalar() == Ordinal(15));
  CHECK(first[4].scalar() == Ordinal(45));
}
