#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ordlab/set_expr.hpp"
#include "support/set_gen.hpp"

using namespace ordlab;

namespace {

Ordinal W(std::uint64_t e, std::uint64_t c) { return mul(omega_pow(Ordinal(e)), Ordinal(c)); }

Carrier car_w2() { return Carrier::ordinal(omega_pow(Ordinal(2))); }
Carrier car_w3() { return Carrier::ordinal(omega_pow(Ordinal(3))); }

SetExpr aff(const Carrier& c, Ordinal d, Ordinal g, Ordinal b) {
  return SetExpr(c, {AffImg{std::move(d), std::move(g), std::move(b)}});
}

}  // namespace

TEST_CASE("membership basics") {
  // img(0; w; 1) = {w*n : n >= 1}
  auto s = aff(car_w2(), Ordinal(), omega(), Ordinal(1));
  CHECK(member(s, W(1, 7)));
  CHECK(!member(s, W(1, 7) + Ordinal(1)));
  CHECK(!member(s, Ordinal()));
  CHECK(!member(s, omega_pow(Ordinal(2))));  // sup not attained

  auto ap = SetExpr(Carrier::nat(), {NatAP{Nat(1), Nat(3)}});
  CHECK(member(ap, Ordinal(10)));
  CHECK(!member(ap, Ordinal(9)));

  auto geo = SetExpr(Carrier::nat(), {NatGeo{Nat(3), Nat(2), EPSet::all()}});
  CHECK(member(geo, Ordinal(12)));   // 3*2^2
  CHECK(!member(geo, Ordinal(9)));
}

TEST_CASE("extent") {
  auto pts = SetExpr::points(car_w2(), {Point(Ordinal(3)), Point(omega())});
  Extent e = extent(pts);
  CHECK(e.card == Card::Finite);
  CHECK(e.count == 2);
  CHECK(e.min->scalar() == Ordinal(3));
  CHECK(*e.sup == omega());

  auto s = aff(car_w2(), Ordinal(), omega(), Ordinal(1));
  Extent e2 = extent(s);
  CHECK(e2.card == Card::Infinite);
  CHECK(e2.min->scalar() == omega());
  CHECK(*e2.sup == omega_pow(Ordinal(2)));

  CHECK(extent(SetExpr::empty(car_w2())).card == Card::Empty);
}

TEST_CASE("interval intersection fixed examples") {
  auto s = aff(car_w2(), Ordinal(), omega(), Ordinal(1));
  auto cut = intersect_interval(s, W(1, 3), W(1, 5), true, true);
  // Expect exactly {w*3, w*4, w*5}.
  CHECK(member(cut, W(1, 3)));
  CHECK(member(cut, W(1, 4)));
  CHECK(member(cut, W(1, 5)));
  CHECK(!member(cut, W(1, 2)));
  CHECK(!member(cut, W(1, 6)));
  Extent e = extent(cut);
  CHECK(e.card == Card::Finite);
  CHECK(e.count == 3);

  auto pts = SetExpr::points(car_w2(), {Point(Ordinal(1)), Point(omega()), Point(W(2, 1))});
  auto half = intersect_interval(pts, omega(), W(2, 1), true, false);
  Extent eh = extent(half);
  CHECK(eh.count == 1);
  CHECK(member(half, omega()));
}

TEST_CASE("interval intersection respects membership on samples") {
  testgen::Rng rng(31);
  Carrier c = car_w3();
  for (int i = 0; i < 150; ++i) {
    SetExpr s = testgen::random_ord_set(rng, c);
    auto pts = testgen::sample_points(rng, c.top(), 12);
    Ordinal lo = pts[2 + rng.below(4)];
    Ordinal hi = pts[6 + rng.below(4)];
    if (hi < lo) std::swap(lo, hi);
    bool lc = rng.flip(), hc = rng.flip();
    SetExpr cut = intersect_interval(s, lo, hi, lc, hc);
    for (const auto& x : pts) {
      bool in_iv = (lc ? lo <= x : lo < x) && (hc ? x <= hi : x < hi);
      CHECK(member(cut, x) == (member(s, x) && in_iv));
    }
  }
}

TEST_CASE("union and finite difference") {
  Carrier c = car_w2();
  auto s = aff(c, Ordinal(), omega(), Ordinal(1));
  auto u = set_union(s, SetExpr::empty(c));
  testgen::Rng rng(32);
  for (const auto& x : testgen::sample_points(rng, c.top(), 30))
    CHECK(member(u, x) == member(s, x));

  // img(0; w; 1) minus {w*1} = img(w; w; 1)
  auto d = diff_finite(s, SetExpr::points(c, {Point(omega())}));
  CHECK(!member(d, omega()));
  CHECK(member(d, W(1, 2)));
  CHECK(member(d, W(1, 9)));
  for (const auto& x : testgen::sample_points(rng, c.top(), 40)) {
    bool want = member(s, x) && x != omega();
    CHECK(member(d, x) == want);
  }

  // ap(0;2) minus {0,2} = ap(4;2)
  auto ap = SetExpr(Carrier::nat(), {NatAP{Nat(0), Nat(2)}});
  auto ap2 = diff_finite(ap, SetExpr::points(Carrier::nat(), {Point(Ordinal(0)), Point(Ordinal(2))}));
  CHECK(!member(ap2, Ordinal(0)));
  CHECK(!member(ap2, Ordinal(2)));
  CHECK(member(ap2, Ordinal(4)));
  CHECK(member(ap2, Ordinal(100)));
  CHECK(!member(ap2, Ordinal(5)));
}

TEST_CASE("derived set closed forms") {
  Carrier c = car_w2();
  // Finite sets have empty derivative.
  auto pts = SetExpr::points(c, {Point(Ordinal(5)), Point(omega())});
  CHECK(is_empty_set(derived_set(pts)));

  // {w*n} -> {w^2}
  auto s = aff(c, Ordinal(), omega(), Ordinal(1));
  auto d = derived_set(s);
  Extent e = extent(d);
  CHECK(e.card == Card::Finite);
  CHECK(e.count == 1);
  CHECK(member(d, W(2, 1)));

  // (0, w^2) -> {w*n : n>=1} u {w^2}
  auto t = aff(c, Ordinal(), Ordinal(1), Ordinal(2));
  auto dt = derived_set(t);
  CHECK(member(dt, W(1, 1)));
  CHECK(member(dt, W(1, 5)));
  CHECK(member(dt, W(2, 1)));
  CHECK(!member(dt, W(1, 3) + Ordinal(1)));
}

TEST_CASE("derived set agrees with accumulation sampling") {
  // Oracle: lambda is an accumulation point of S iff every (mu, lambda]
  // with mu < lambda meets S \ {lambda}; sample mu along a fundamental
  // sequence.
  testgen::Rng rng(33);
  Carrier c = car_w3();
  auto is_accum = [&](const SetExpr& s, const Ordinal& lam) {
    if (!lam.is_limit()) {
      // Successors/zero can only accumulate via equal smaller neighbors: no.
      return false;
    }
    for (std::uint64_t n = 0; n < 12; ++n) {
      Ordinal mu = fundamental_seq(lam, n);
      SetExpr win = intersect_interval(s, mu, lam, false, true);
      SetExpr wo = diff_finite(win, SetExpr::points(c, {Point(lam)}));
      if (is_empty_set(wo)) return false;
    }
    return true;
  };
  for (int i = 0; i < 60; ++i) {
    SetExpr s = testgen::random_ord_set(rng, c);
    SetExpr d = derived_set(s);
    for (const auto& x : testgen::sample_points(rng, c.top(), 14)) {
      if (!x.is_limit()) {
        CHECK(!member(d, x));
        continue;
      }
      CHECK(member(d, x) == is_accum(s, x));
    }
  }
}

TEST_CASE("order type fixed values") {
  Carrier c3 = car_w3();
  auto pts = SetExpr::points(c3, {Point(Ordinal(5)), Point(omega()), Point(W(2, 1))});
  CHECK(order_type(pts) == Ordinal(3));

  // {w*n} u {0}: 1 + w = w
  auto s = set_union(aff(c3, Ordinal(), omega(), Ordinal(1)),
                     SetExpr::points(c3, {Point(Ordinal())}));
  CHECK(order_type(s) == omega());

  // (0, w^2) has type w^2
  CHECK(order_type(aff(c3, Ordinal(), Ordinal(1), Ordinal(2))) == omega_pow(Ordinal(2)));

  // full interval [a, b) has type left_sub(a, b): spot-check [w, w*2).
  auto seg = SetExpr(c3, affine_segment_atoms(Ordinal(), Ordinal(1), omega(), W(1, 2)));
  CHECK(order_type(seg) == omega());

  // Two interleaved progressions still have type w.
  auto inter = set_union(aff(c3, Ordinal(), W(1, 1), Ordinal(1)),
                         aff(c3, Ordinal(1), W(1, 1), Ordinal(1)));
  CHECK(order_type(inter) == omega());

  // Progression + isolated point above its sup.
  auto above = set_union(aff(c3, Ordinal(), omega(), Ordinal(1)),
                         SetExpr::points(c3, {Point(W(2, 1) + Ordinal(3))}));
  CHECK(order_type(above) == omega() + Ordinal(1));
}

TEST_CASE("order type additivity across cuts") {
  testgen::Rng rng(34);
  Carrier c = car_w3();
  for (int i = 0; i < 120; ++i) {
    SetExpr s = testgen::random_ord_set(rng, c);
    Ordinal cut = testgen::sample_points(rng, c.top(), 5)[3];
    SetExpr left = intersect_interval(s, Ordinal(), cut, true, true);
    SetExpr right = intersect_interval(s, cut, c.top(), false, true);
    CHECK(order_type(left) + order_type(right) == order_type(s));
  }
}

TEST_CASE("order type enumeration prefix oracle") {
  testgen::Rng rng(35);
  Carrier c = car_w3();
  for (int i = 0; i < 80; ++i) {
    SetExpr s = testgen::random_ord_set(rng, c);
    Ordinal t = order_type(s);
    auto prefix = enumerate_inorder(s, 25);
    if (t.is_finite()) {
      CHECK(Nat(prefix.size()) == t.finite_value());
    } else {
      CHECK(prefix.size() == 25);
      for (std::size_t k = 1; k < prefix.size(); ++k)
        CHECK(prefix[k - 1] < prefix[k]);
    }
  }
}

TEST_CASE("choose_progression") {
  Carrier c = car_w2();
  auto t = aff(c, Ordinal(), Ordinal(1), Ordinal(2));
  auto p = choose_progression(t);
  CHECK(order_type(p) == omega());
  Extent de = extent(derived_set(p));
  CHECK(de.card == Card::Finite);
  CHECK(de.count == 1);
  testgen::Rng rng(36);
  for (const auto& x : testgen::sample_points(rng, c.top(), 30))
    if (member(p, x)) CHECK(member(t, x));

  auto ap = SetExpr(Carrier::nat(), {NatAP{Nat(0), Nat(2)}});
  auto pap = choose_progression(ap);
  CHECK(order_type(pap) == omega());

  CHECK_THROWS_AS(choose_progression(SetExpr::points(c, {Point(Ordinal(1))})), Error);
}

TEST_CASE("cb rank and degree") {
  // Full carrier [0, w^3*2] has rank 3, degree 2.
  Carrier c = Carrier::ordinal(W(3, 2));
  auto full = SetExpr::full(c);
  auto cls = cb_rank_degree(full);
  CHECK(cls.rank == Ordinal(3));
  CHECK(cls.degree == 2);

  // Finite discrete space.
  auto pts = SetExpr::points(c, {Point(Ordinal(0)), Point(Ordinal(1)), Point(Ordinal(2))});
  auto cls2 = cb_rank_degree(pts);
  CHECK(cls2.rank == Ordinal(0));
  CHECK(cls2.degree == 3);

  // {w*n} u {w^2}: homeomorphic to w+1.
  Carrier c2 = car_w2();
  auto s = set_union(aff(c2, Ordinal(), omega(), Ordinal(1)),
                     SetExpr::points(c2, {Point(W(2, 1))}));
  auto cls3 = cb_rank_degree(s);
  CHECK(cls3.rank == Ordinal(1));
  CHECK(cls3.degree == 1);

  // Missing limit point: not compact.
  CHECK_THROWS_AS(cb_rank_degree(aff(c2, Ordinal(), omega(), Ordinal(1))), Error);
}

TEST_CASE("rect sections and projections") {
  Carrier pc = Carrier::prod(Carrier::nat(), Carrier::nat());
  auto evens = std::make_shared<SetExpr>(SetExpr(Carrier::nat(), {NatAP{Nat(0), Nat(2)}}));
  auto all = std::make_shared<SetExpr>(SetExpr::full(Carrier::nat()));
  SetExpr r(pc, {Rect{evens, all}});
  auto s4 = section(r, Point(Ordinal(4)));
  CHECK(member(s4, Ordinal(17)));
  auto s3 = section(r, Point(Ordinal(3)));
  CHECK(is_empty_set(s3));
  auto rows = project_rows(r);
  CHECK(member(rows, Ordinal(4)));
  CHECK(!member(rows, Ordinal(3)));
}

TEST_CASE("row classes cover and are disjoint") {
  Carrier pc = Carrier::prod(Carrier::nat(), Carrier::nat());
  auto r2 = std::make_shared<SetExpr>(SetExpr(Carrier::nat(), {NatAP{Nat(0), Nat(2)}}));
  auto r3 = std::make_shared<SetExpr>(SetExpr(Carrier::nat(), {NatAP{Nat(0), Nat(3)}}));
  auto c1 = std::make_shared<SetExpr>(SetExpr::points(Carrier::nat(), {Point(Ordinal(1))}));
  auto c2 = std::make_shared<SetExpr>(SetExpr::points(Carrier::nat(), {Point(Ordinal(2))}));
  SetExpr s(pc, {Rect{r2, c1}, Rect{r3, c2}});
  auto classes = row_classes(s);
  CHECK(classes.size() == 4);
  // Oracle: sections evaluated at rows 0..12 agree with the class sections.
  for (std::uint64_t row = 0; row <= 12; ++row) {
    SetExpr sec = section(s, Point(Ordinal(row)));
    int hits = 0;
    for (const auto& cl : classes) {
      if (!member(cl.rows, Ordinal(row))) continue;
      ++hits;
      for (std::uint64_t col = 0; col <= 6; ++col)
        CHECK(member(sec, Ordinal(col)) == member(cl.section, Ordinal(col)));
    }
    CHECK(hits == 1);
  }
}

TEST_CASE("full carrier expression") {
  Carrier c = Carrier::ordinal(W(2, 1) + Ordinal(3));
  auto full = SetExpr::full(c);
  testgen::Rng rng(37);
  for (const auto& x : testgen::sample_points(rng, c.top(), 40)) CHECK(member(full, x));
  CHECK(order_type(full) == W(2, 1) + Ordinal(4));  // |[0, w^2+3]| as an order
}
