#include "ordlab/set_expr.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "ordlab/error.hpp"
#include "ordlab/nat_sets.hpp"

namespace ordlab {

namespace {

void check_atom(const Atom& a, const Carrier& c) {
  if (std::holds_alternative<Pts>(a)) {
    for (const auto& p : std::get<Pts>(a).pts)
      if (!point_in_carrier(p, c)) fail(ErrKind::CarrierMismatch, "point outside carrier: " + p.str());
    return;
  }
  if (std::holds_alternative<AffImg>(a)) {
    const auto& f = std::get<AffImg>(a);
    if (!c.is_ord()) fail(ErrKind::CarrierMismatch, "affine-image atom needs an ordinal carrier");
    if (f.gamma.is_zero() || f.beta.is_zero()) fail(ErrKind::BadSpec, "img needs gamma, beta >= 1");
    if (!(aff_sup(f) <= c.top()))
      fail(ErrKind::CarrierMismatch, "img atom exceeds carrier: sup " + aff_sup(f).str());
    return;
  }
  if (std::holds_alternative<NatAP>(a)) {
    const auto& ap = std::get<NatAP>(a);
    if (!c.is_nat()) fail(ErrKind::CarrierMismatch, "ap atom needs the nat carrier");
    if (ap.d < 1) fail(ErrKind::BadSpec, "ap needs d >= 1");
    return;
  }
  if (std::holds_alternative<NatGeo>(a)) {
    const auto& g = std::get<NatGeo>(a);
    if (!c.is_nat()) fail(ErrKind::CarrierMismatch, "geo atom needs the nat carrier");
    if (g.c < 1 || g.q < 2) fail(ErrKind::BadSpec, "geo needs c >= 1, q >= 2");
    return;
  }
  const auto& r = std::get<Rect>(a);
  if (!c.is_prod()) fail(ErrKind::CarrierMismatch, "rect atom needs a product carrier");
  if (!(r.row->carrier() == c.row()) || !(r.col->carrier() == c.col()))
    fail(ErrKind::CarrierMismatch, "rect components do not match the product carrier");
}

Ordinal nat_value_as_ordinal(const Nat& v) { return Ordinal(v); }

}  // namespace

SetExpr::SetExpr(Carrier c, std::vector<Atom> atoms) : carrier_(std::move(c)) {
  for (auto& a : atoms) check_atom(a, carrier_);
  atoms_ = std::move(atoms);
}

SetExpr SetExpr::points(Carrier c, std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.empty()) return SetExpr(std::move(c));
  return SetExpr(std::move(c), {Pts{std::move(pts)}});
}

SetExpr SetExpr::full(const Carrier& c) {
  switch (c.kind()) {
    case Carrier::K::Nat:
      return SetExpr(c, {NatAP{Nat(0), Nat(1)}});
    case Carrier::K::Ord: {
      std::vector<Atom> atoms;
      atoms.push_back(Pts{{Point(Ordinal())}});
      if (!c.top().is_zero()) {
        auto segs = affine_segment_atoms(Ordinal(), Ordinal(1), Ordinal(1),
                                         c.top() + Ordinal(1));
        atoms.insert(atoms.end(), segs.begin(), segs.end());
      }
      return SetExpr(c, std::move(atoms));
    }
    case Carrier::K::Prod: {
      Rect r{std::make_shared<SetExpr>(full(c.row())), std::make_shared<SetExpr>(full(c.col()))};
      return SetExpr(c, {Atom{r}});
    }
  }
  fail(ErrKind::Internal, "unknown carrier kind");
}

SetExpr SetExpr::with_atom(Atom a) const {
  check_atom(a, carrier_);
  SetExpr out = *this;
  out.atoms_.push_back(std::move(a));
  return out;
}

SetExpr nat_with_holes(SetExpr base, std::vector<Atom> holes) {
  if (!base.carrier().is_nat())
    fail(ErrKind::CarrierMismatch, "subtracted sparse parts only exist on the nat carrier");
  for (auto& h : holes) {
    if (!std::holds_alternative<Pts>(h) && !std::holds_alternative<NatGeo>(h))
      fail(ErrKind::BadSpec, "holes must be points or geo atoms");
    check_atom(h, base.carrier());
  }
  base.holes_ = std::move(holes);
  return base;
}

Ordinal aff_sup(const AffImg& a) { return a.delta + mul(a.gamma, omega_pow(a.beta)); }

bool atom_member(const Atom& a, const Point& x, const Carrier& c) {
  if (std::holds_alternative<Pts>(a)) {
    const auto& ps = std::get<Pts>(a).pts;
    return std::binary_search(ps.begin(), ps.end(), x) ||
           std::find(ps.begin(), ps.end(), x) != ps.end();
  }
  if (std::holds_alternative<AffImg>(a)) {
    const auto& f = std::get<AffImg>(a);
    auto s = solve_affine(f.delta, f.gamma, x.scalar());
    return s.ok && s.xi < omega_pow(f.beta);
  }
  if (std::holds_alternative<NatAP>(a)) {
    const auto& ap = std::get<NatAP>(a);
    if (!x.scalar().is_finite()) return false;
    Nat v = x.scalar().finite_value();
    return v >= ap.a && (v - ap.a) % ap.d == 0;
  }
  if (std::holds_alternative<NatGeo>(a)) {
    const auto& g = std::get<NatGeo>(a);
    if (!x.scalar().is_finite()) return false;
    return natset::geo_index_of(g, x.scalar().finite_value()).has_value();
  }
  const auto& r = std::get<Rect>(a);
  auto [row, col] = split_point(x, c);
  return member(*r.row, row) && member(*r.col, col);
}

bool member(const SetExpr& s, const Point& x) {
  if (!point_in_carrier(x, s.carrier()))
    fail(ErrKind::CarrierMismatch, "point " + x.str() + " outside carrier " + s.carrier().str());
  bool in = false;
  for (const auto& a : s.atoms())
    if (atom_member(a, x, s.carrier())) { in = true; break; }
  if (!in) return false;
  for (const auto& h : s.holes())
    if (atom_member(h, x, s.carrier())) return false;
  return true;
}

std::vector<Atom> affine_segment_atoms(const Ordinal& delta, const Ordinal& gamma,
                                       const Ordinal& xi_lo0, const Ordinal& xi_hi) {
  std::vector<Atom> out;
  Ordinal xi_lo = xi_lo0;
  if (xi_lo < Ordinal(1)) xi_lo = Ordinal(1);
  if (!(xi_lo < xi_hi)) return out;
  Ordinal len = left_sub(xi_lo, xi_hi);
  Ordinal base = xi_lo;
  std::vector<Point> pts;
  for (const auto& t : len.terms()) {
    if (t.exp.is_zero()) {
      Nat c = t.coeff;
      for (Nat i = 0; i < c; ++i) {
        pts.push_back(Point(delta + mul(gamma, base)));
        base = base + Ordinal(1);
      }
    } else {
      Nat c = t.coeff;
      for (Nat i = 0; i < c; ++i) {
        pts.push_back(Point(delta + mul(gamma, base)));
        out.push_back(AffImg{delta + mul(gamma, base), gamma, t.exp});
        base = base + omega_pow(t.exp);
      }
    }
  }
  if (!pts.empty()) {
    std::sort(pts.begin(), pts.end());
    out.push_back(Pts{std::move(pts)});
  }
  return out;
}

namespace {

std::vector<Point> enumerate_inorder_all_finite(const SetExpr& s);

struct AtomExtent {
  Card card = Card::Empty;
  Nat count;  // when finite, before union dedupe
  std::optional<Ordinal> min, sup;
};

AtomExtent atom_extent(const Atom& a, const Carrier& c) {
  AtomExtent e;
  if (std::holds_alternative<Pts>(a)) {
    const auto& ps = std::get<Pts>(a).pts;
    if (ps.empty()) return e;
    e.card = Card::Finite;
    e.count = ps.size();
    if (c.is_scalar()) {
      e.min = ps.front().scalar();
      e.sup = ps.back().scalar();
    }
    return e;
  }
  if (std::holds_alternative<AffImg>(a)) {
    const auto& f = std::get<AffImg>(a);
    e.card = Card::Infinite;
    e.min = f.delta + f.gamma;
    e.sup = aff_sup(f);
    return e;
  }
  if (std::holds_alternative<NatAP>(a)) {
    const auto& ap = std::get<NatAP>(a);
    e.card = Card::Infinite;
    e.min = Ordinal(ap.a);
    e.sup = omega();
    return e;
  }
  if (std::holds_alternative<NatGeo>(a)) {
    const auto& g = std::get<NatGeo>(a);
    if (g.idx.is_empty()) return e;
    if (g.idx.is_infinite()) {
      e.card = Card::Infinite;
      e.sup = omega();
    } else {
      e.card = Card::Finite;
      e.count = *g.idx.size_if_finite();
      auto last = g.idx.take(*g.idx.size_if_finite());
      e.sup = Ordinal(g.c * nat_pow(g.q, last.back()));
    }
    e.min = Ordinal(g.c * nat_pow(g.q, *g.idx.min()));
    return e;
  }
  const auto& r = std::get<Rect>(a);
  Extent re = extent(*r.row), ce = extent(*r.col);
  if (re.card == Card::Empty || ce.card == Card::Empty) return e;
  if (re.card == Card::Infinite || ce.card == Card::Infinite) {
    e.card = Card::Infinite;
    return e;
  }
  e.card = Card::Finite;
  e.count = re.count * ce.count;
  return e;
}

// All points of a finite atom.
std::vector<Point> atom_points(const Atom& a, const Carrier& c) {
  if (std::holds_alternative<Pts>(a)) return std::get<Pts>(a).pts;
  if (std::holds_alternative<NatGeo>(a)) {
    const auto& g = std::get<NatGeo>(a);
    auto n = g.idx.size_if_finite();
    if (!n) fail(ErrKind::NotFinite, "atom_points on an infinite geo atom");
    std::vector<Point> out;
    for (auto i : g.idx.take(*n)) out.push_back(Point(Ordinal(g.c * nat_pow(g.q, i))));
    return out;
  }
  if (std::holds_alternative<Rect>(a)) {
    const auto& r = std::get<Rect>(a);
    auto rows = enumerate_inorder_all_finite(*r.row);
    auto cols = enumerate_inorder_all_finite(*r.col);
    std::vector<Point> out;
    for (const auto& rp : rows)
      for (const auto& cp : cols) out.push_back(Point::pair(rp, cp));
    return out;
  }
  fail(ErrKind::NotFinite, "atom_points on an infinite atom");
}

std::vector<Point> enumerate_inorder_all_finite(const SetExpr& s);

}  // namespace

Extent extent(const SetExpr& s) {
  if (s.carrier().is_nat()) {
    auto nf = natset::to_nf(s);
    Extent e;
    if (natset::nf_is_empty(nf)) return e;
    if (natset::nf_is_infinite(nf)) {
      e.card = Card::Infinite;
      e.sup = omega();
    } else {
      e.card = Card::Finite;
      e.count = natset::nf_count(nf);
      auto vals = natset::nf_take(nf, to_u64(Nat(e.count)));
      e.sup = Ordinal(vals.back());
    }
    e.min = Point(Ordinal(natset::nf_take(nf, 1).at(0)));
    return e;
  }
  Extent out;
  bool any_infinite = false;
  std::set<Point> finite_pts;
  std::optional<Ordinal> mn, sp;
  for (const auto& a : s.atoms()) {
    AtomExtent ae = atom_extent(a, s.carrier());
    if (ae.card == Card::Empty) continue;
    if (ae.card == Card::Infinite) any_infinite = true;
    else {
      auto pts = atom_points(a, s.carrier());
      finite_pts.insert(pts.begin(), pts.end());
    }
    if (ae.min && (!mn || *ae.min < *mn)) mn = ae.min;
    if (ae.sup && (!sp || *sp < *ae.sup)) sp = ae.sup;
  }
  if (!any_infinite && finite_pts.empty()) return out;
  if (any_infinite) {
    out.card = Card::Infinite;
  } else {
    out.card = Card::Finite;
    out.count = finite_pts.size();
  }
  if (s.carrier().is_scalar()) {
    if (mn) out.min = Point(*mn);
    out.sup = sp;
  }
  return out;
}

SetExpr intersect_interval(const SetExpr& s, const Ordinal& lo, const Ordinal& hi,
                           bool lo_closed, bool hi_closed) {
  IntervalBounds b;
  b.lo = lo;
  b.lo_closed = lo_closed;
  b.hi = hi;
  b.hi_closed = hi_closed;
  return intersect_interval(s, b);
}

SetExpr intersect_interval(const SetExpr& s, const IntervalBounds& b) {
  if (!s.carrier().is_scalar())
    fail(ErrKind::CarrierMismatch, "interval intersection needs a scalar carrier");
  // Normalize to half-open [lo, hi).
  Ordinal lo = b.lo_closed ? b.lo : b.lo + Ordinal(1);
  std::optional<Ordinal> hi;
  if (!b.hi_infinite) hi = b.hi_closed ? b.hi + Ordinal(1) : b.hi;

  std::vector<Atom> atoms;
  std::vector<Point> pts;
  auto keep_point = [&](const Ordinal& v) {
    if (v < lo) return;
    if (hi && !(v < *hi)) return;
    pts.push_back(Point(v));
  };
  for (const auto& a : s.atoms()) {
    if (std::holds_alternative<Pts>(a)) {
      for (const auto& p : std::get<Pts>(a).pts) keep_point(p.scalar());
    } else if (std::holds_alternative<AffImg>(a)) {
      const auto& f = std::get<AffImg>(a);
      Ordinal xi_lo = Ordinal(1);
      if (!(f.delta >= lo)) {
        xi_lo = ceil_div_left(left_sub(f.delta, lo), f.gamma);
        if (xi_lo < Ordinal(1)) xi_lo = Ordinal(1);
      }
      Ordinal xi_hi = omega_pow(f.beta);
      if (hi) {
        if (f.delta >= *hi) {
          xi_hi = Ordinal(1);
        } else {
          Ordinal cap = ceil_div_left(left_sub(f.delta, *hi), f.gamma);
          if (cap < xi_hi) xi_hi = cap;
        }
      }
      auto segs = affine_segment_atoms(f.delta, f.gamma, xi_lo, xi_hi);
      atoms.insert(atoms.end(), segs.begin(), segs.end());
    } else if (std::holds_alternative<NatAP>(a)) {
      const auto& ap = std::get<NatAP>(a);
      if (!lo.is_finite()) continue;
      Nat lov = lo.finite_value();
      Nat first = ap.a >= lov ? ap.a : ap.a + ((lov - ap.a + ap.d - 1) / ap.d) * ap.d;
      if (!hi) {
        atoms.push_back(NatAP{first, ap.d});
      } else if (hi->is_finite()) {
        Nat hiv = hi->finite_value();
        for (Nat v = first; v < hiv; v += ap.d) {
          pts.push_back(Point(Ordinal(v)));
          if (pts.size() > (1u << 20)) fail(ErrKind::BudgetExceeded, "interval slice too large");
        }
      } else {
        atoms.push_back(NatAP{first, ap.d});
      }
    } else if (std::holds_alternative<NatGeo>(a)) {
      const auto& g = std::get<NatGeo>(a);
      if (!lo.is_finite()) continue;
      EPSet idx = g.idx;
      // Drop indices with value below lo.
      Nat lov = lo.finite_value();
      std::uint64_t n0 = 0;
      Nat v = g.c;
      while (v < lov) { v *= g.q; ++n0; }
      idx = idx.tail_from(n0);
      if (hi && hi->is_finite()) {
        Nat hiv = hi->finite_value();
        std::uint64_t n1 = 0;
        Nat w = g.c;
        while (w < hiv) { w *= g.q; ++n1; }
        // keep indices < n1
        EPSet below = ep_diff(idx, idx.tail_from(n1));
        idx = below;
      }
      if (!idx.is_empty()) atoms.push_back(NatGeo{g.c, g.q, idx});
    } else {
      fail(ErrKind::CarrierMismatch, "interval intersection on a product carrier");
    }
  }
  if (!pts.empty()) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    atoms.push_back(Pts{std::move(pts)});
  }
  SetExpr out(s.carrier(), std::move(atoms));
  if (s.has_holes()) {
    SetExpr holes_set(s.carrier(), s.holes());
    SetExpr clipped = intersect_interval(holes_set, b);
    return boolean_nat(out, clipped, BoolOp::Diff);
  }
  return out;
}

SetExpr set_union(const SetExpr& a, const SetExpr& b) {
  if (!(a.carrier() == b.carrier()))
    fail(ErrKind::CarrierMismatch, "union of sets over different carriers");
  if (a.carrier().is_nat() && (a.has_holes() || b.has_holes()))
    return boolean_nat(a, b, BoolOp::Union);
  std::vector<Atom> atoms = a.atoms();
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  return SetExpr(a.carrier(), std::move(atoms));
}

SetExpr diff_finite(const SetExpr& s, const SetExpr& finite_part) {
  if (!(s.carrier() == finite_part.carrier()))
    fail(ErrKind::CarrierMismatch, "diff_finite carriers differ");
  Extent fe = extent(finite_part);
  if (fe.card == Card::Infinite) fail(ErrKind::NotFinite, "diff_finite needs a finite subtrahend");
  if (fe.card == Card::Empty) return s;
  if (s.carrier().is_nat()) return boolean_nat(s, finite_part, BoolOp::Diff);

  std::vector<Point> removed = enumerate_inorder(finite_part, to_u64(Nat(fe.count)));
  SetExpr cur = s;
  for (const auto& p : removed) {
    std::vector<Atom> next;
    for (const auto& a : cur.atoms()) {
      if (!atom_member(a, p, cur.carrier())) {
        next.push_back(a);
        continue;
      }
      if (std::holds_alternative<Pts>(a)) {
        Pts ps = std::get<Pts>(a);
        ps.pts.erase(std::remove(ps.pts.begin(), ps.pts.end(), p), ps.pts.end());
        if (!ps.pts.empty()) next.push_back(ps);
      } else if (std::holds_alternative<AffImg>(a)) {
        const auto& f = std::get<AffImg>(a);
        auto sol = solve_affine(f.delta, f.gamma, p.scalar());
        auto pre = affine_segment_atoms(f.delta, f.gamma, Ordinal(1), sol.xi);
        next.insert(next.end(), pre.begin(), pre.end());
        next.push_back(AffImg{f.delta + mul(f.gamma, sol.xi), f.gamma, f.beta});
      } else if (std::holds_alternative<Rect>(a)) {
        const auto& r = std::get<Rect>(a);
        auto [rp, cp] = split_point(p, cur.carrier());
        SetExpr rowpt = SetExpr::points(r.row->carrier(), {rp});
        SetExpr colpt = SetExpr::points(r.col->carrier(), {cp});
        auto rows_rest = std::make_shared<SetExpr>(diff_finite(*r.row, rowpt));
        auto cols_rest = std::make_shared<SetExpr>(diff_finite(*r.col, colpt));
        auto rowonly = std::make_shared<SetExpr>(SetExpr::points(r.row->carrier(), {rp}));
        if (!is_empty_set(*rows_rest)) next.push_back(Rect{rows_rest, r.col});
        if (!is_empty_set(*cols_rest)) next.push_back(Rect{rowonly, cols_rest});
      } else {
        fail(ErrKind::Internal, "unexpected atom kind in ordinal diff_finite");
      }
    }
    cur = SetExpr(cur.carrier(), std::move(next));
  }
  return cur;
}

SetExpr derived_set(const SetExpr& s) {
  if (!s.carrier().is_ord())
    fail(ErrKind::CarrierMismatch, "derived_set is defined on ordinal carriers");
  std::vector<Atom> atoms;
  std::vector<Point> pts;
  for (const auto& a : s.atoms()) {
    if (std::holds_alternative<Pts>(a)) continue;
    const auto& f = std::get<AffImg>(a);
    pts.push_back(Point(aff_sup(f)));
    if (f.beta > Ordinal(1)) {
      Ordinal beta1 = left_sub(Ordinal(1), f.beta);  // 1 + beta1 = beta
      atoms.push_back(AffImg{f.delta, mul(f.gamma, omega()), beta1});
    }
  }
  if (!pts.empty()) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    atoms.push_back(Pts{std::move(pts)});
  }
  return SetExpr(s.carrier(), std::move(atoms));
}

namespace {

std::vector<Point> enumerate_inorder_all_finite(const SetExpr& s) {  // NOLINT

  Extent e = extent(s);
  if (e.card == Card::Infinite) fail(ErrKind::NotFinite, "expected a finite set");
  if (e.card == Card::Empty) return {};
  if (s.carrier().is_prod()) {
    std::set<Point> out;
    for (const auto& a : s.atoms()) {
      auto pts = atom_points(a, s.carrier());
      out.insert(pts.begin(), pts.end());
    }
    return {out.begin(), out.end()};
  }
  return enumerate_inorder(s, to_u64(Nat(e.count)));
}

}  // namespace

Ordinal order_type(const SetExpr& s) {
  if (s.carrier().is_nat()) {
    auto nf = natset::to_nf(s);
    if (natset::nf_is_infinite(nf)) return omega();
    return Ordinal(natset::nf_count(nf));
  }
  if (!s.carrier().is_ord()) fail(ErrKind::CarrierMismatch, "order_type needs a scalar carrier");

  // Points and affine images, holes impossible here.
  std::set<Ordinal, OrdinalLess> points;
  std::vector<AffImg> affs;
  for (const auto& a : s.atoms()) {
    if (std::holds_alternative<Pts>(a)) {
      for (const auto& p : std::get<Pts>(a).pts) points.insert(p.scalar());
    } else {
      affs.push_back(std::get<AffImg>(a));
    }
  }
  if (affs.empty()) return Ordinal(points.size());

  Ordinal s1;
  for (const auto& f : affs)
    if (aff_sup(f) > s1) s1 = aff_sup(f);
  Ordinal beta_max;
  for (const auto& f : affs)
    if (aff_sup(f) == s1 && f.beta > beta_max) beta_max = f.beta;

  // Points at or above the common sup are appended after the cofinal block.
  Nat appended = 0;
  for (const auto& p : points)
    if (p >= s1) appended += 1;

  std::optional<Ordinal> s2;
  for (const auto& f : affs) {
    Ordinal sup = aff_sup(f);
    if (sup < s1 && (!s2 || sup > *s2)) s2 = sup;
  }

  Ordinal tail_type = omega_pow(beta_max) + Ordinal(appended);
  if (!s2) {
    // Everything below s1 is cofinal in it; points below s1 are absorbed.
    return tail_type;
  }
  SetExpr left = intersect_interval(s, Ordinal(), *s2, true, true);
  return order_type(left) + tail_type;
}

SetExpr choose_progression(const SetExpr& s) {
  if (s.carrier().is_nat()) return natset::nat_choose_progression(s);
  if (!s.carrier().is_ord())
    fail(ErrKind::BudgetExceeded, "progressions are chosen on scalar carriers only");
  if (!is_infinite_set(s)) fail(ErrKind::NotInfinite, "choose_progression needs an infinite set");
  for (const auto& a : s.atoms()) {
    if (!std::holds_alternative<AffImg>(a)) continue;
    const auto& f = std::get<AffImg>(a);
    if (f.beta == Ordinal(1)) return SetExpr(s.carrier(), {a});
    return SetExpr(s.carrier(), {AffImg{f.delta, f.gamma, Ordinal(1)}});
  }
  fail(ErrKind::Internal, "infinite ordinal set without an affine atom");
}

bool is_compact_subspace(const SetExpr& s) {
  if (s.carrier().is_nat()) return is_finite_set(s) && !is_empty_set(s);
  if (!s.carrier().is_ord()) fail(ErrKind::BudgetExceeded, "compactness test on products");
  if (is_empty_set(s)) return false;
  // derived_set(S) within S reduces to: every affine atom's sup is a member
  // (the rest of each atom's derivative already sits inside the atom).
  for (const auto& a : s.atoms()) {
    if (!std::holds_alternative<AffImg>(a)) continue;
    if (!member(s, Point(aff_sup(std::get<AffImg>(a))))) return false;
  }
  return true;
}

Classification cb_rank_degree(const SetExpr& s) {
  if (!is_compact_subspace(s))
    fail(ErrKind::NotCompact, "cb_rank_degree needs a nonempty compact subspace");
  if (s.carrier().is_nat()) {
    Extent e = extent(s);
    return {Ordinal(), e.count};
  }
  Ordinal rank;
  for (const auto& a : s.atoms())
    if (std::holds_alternative<AffImg>(a) && std::get<AffImg>(a).beta > rank)
      rank = std::get<AffImg>(a).beta;
  if (rank.is_zero()) {
    Extent e = extent(s);
    return {Ordinal(), e.count};
  }
  std::set<Ordinal, OrdinalLess> tops;
  for (const auto& a : s.atoms())
    if (std::holds_alternative<AffImg>(a) && std::get<AffImg>(a).beta == rank)
      tops.insert(aff_sup(std::get<AffImg>(a)));
  return {rank, Nat(tops.size())};
}

SetExpr section(const SetExpr& s, const Point& row) {
  if (!s.carrier().is_prod()) fail(ErrKind::CarrierMismatch, "section needs a product carrier");
  SetExpr out = SetExpr::empty(s.carrier().col());
  for (const auto& a : s.atoms()) {
    if (std::holds_alternative<Rect>(a)) {
      const auto& r = std::get<Rect>(a);
      if (member(*r.row, row)) out = set_union(out, *r.col);
    } else if (std::holds_alternative<Pts>(a)) {
      std::vector<Point> hits;
      for (const auto& p : std::get<Pts>(a).pts) {
        auto [rp, cp] = split_point(p, s.carrier());
        if (rp == row) hits.push_back(cp);
      }
      if (!hits.empty()) out = set_union(out, SetExpr::points(s.carrier().col(), hits));
    } else {
      fail(ErrKind::Internal, "unexpected atom on product carrier");
    }
  }
  return out;
}

SetExpr project_rows(const SetExpr& s) {
  if (!s.carrier().is_prod()) fail(ErrKind::CarrierMismatch, "project_rows needs a product carrier");
  SetExpr out = SetExpr::empty(s.carrier().row());
  for (const auto& a : s.atoms()) {
    if (std::holds_alternative<Rect>(a)) {
      const auto& r = std::get<Rect>(a);
      if (!is_empty_set(*r.col)) out = set_union(out, *r.row);
    } else {
      std::vector<Point> hits;
      for (const auto& p : std::get<Pts>(a).pts) {
        auto [rp, cp] = split_point(p, s.carrier());
        hits.push_back(rp);
      }
      if (!hits.empty()) out = set_union(out, SetExpr::points(s.carrier().row(), hits));
    }
  }
  return out;
}

std::vector<RowClass> row_classes(const SetExpr& s) {
  if (!s.carrier().is_prod()) fail(ErrKind::CarrierMismatch, "row_classes needs a product carrier");
  if (!s.carrier().row().is_nat())
    fail(ErrKind::UnsupportedRows, "full row classes need nat rows; use project_rows");
  // Normalize point atoms into rects, gather distinct row sets.
  std::vector<std::pair<SetExpr, SetExpr>> rects;
  for (const auto& a : s.atoms()) {
    if (std::holds_alternative<Rect>(a)) {
      rects.push_back({*std::get<Rect>(a).row, *std::get<Rect>(a).col});
    } else {
      for (const auto& p : std::get<Pts>(a).pts) {
        auto [rp, cp] = split_point(p, s.carrier());
        rects.push_back({SetExpr::points(s.carrier().row(), {rp}),
                         SetExpr::points(s.carrier().col(), {cp})});
      }
    }
  }
  if (rects.size() > 12) fail(ErrKind::BudgetExceeded, "too many rect atoms for row classes");
  std::vector<RowClass> out;
  std::uint64_t k = rects.size();
  for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
    SetExpr rows = SetExpr::full(s.carrier().row());
    SetExpr sect = SetExpr::empty(s.carrier().col());
    for (std::uint64_t i = 0; i < k; ++i) {
      if (mask & (1ull << i)) {
        rows = boolean_nat(rows, rects[i].first, BoolOp::Intersect);
        sect = set_union(sect, rects[i].second);
      } else {
        rows = boolean_nat(rows, rects[i].first, BoolOp::Diff);
      }
    }
    if (is_empty_set(rows)) continue;
    out.push_back(RowClass{std::move(rows), std::move(sect)});
  }
  return out;
}

std::vector<Point> enumerate_inorder(const SetExpr& s, std::size_t count) {
  if (!s.carrier().is_scalar())
    fail(ErrKind::CarrierMismatch, "in-order enumeration needs a scalar carrier");
  if (s.carrier().is_nat()) {
    auto nf = natset::to_nf(s);
    std::vector<Point> out;
    for (const auto& v : natset::nf_take(nf, count)) out.push_back(Point(Ordinal(v)));
    return out;
  }
  // k-way merge over atoms; AffImg atoms enumerate m(1), m(2), ... which are
  // their smallest elements in order.
  struct Cursor {
    const Atom* a;
    std::uint64_t i = 0;
    std::optional<Ordinal> cur;
  };
  std::vector<Cursor> cs;
  auto value_at = [&](const Atom& a, std::uint64_t i) -> std::optional<Ordinal> {
    if (std::holds_alternative<Pts>(a)) {
      const auto& ps = std::get<Pts>(a).pts;
      if (i >= ps.size()) return std::nullopt;
      return ps[i].scalar();
    }
    const auto& f = std::get<AffImg>(a);
    return f.delta + mul(f.gamma, Ordinal(i + 1));
  };
  for (const auto& a : s.atoms()) {
    Cursor c{&a, 0, value_at(a, 0)};
    if (c.cur) cs.push_back(std::move(c));
  }
  std::vector<Point> out;
  std::optional<Ordinal> last;
  while (out.size() < count && !cs.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < cs.size(); ++i)
      if (*cs[i].cur < *cs[best].cur) best = i;
    Ordinal v = *cs[best].cur;
    cs[best].i += 1;
    cs[best].cur = value_at(*cs[best].a, cs[best].i);
    if (!cs[best].cur) cs.erase(cs.begin() + best);
    if (!last || *last < v) {
      out.push_back(Point(v));
      last = v;
    }
  }
  return out;
}

Point min_point(const SetExpr& s) {
  auto v = enumerate_inorder(s, 1);
  if (v.empty()) fail(ErrKind::Undefined, "min of an empty set");
  return v[0];
}

std::string atom_str(const Atom& a) {
  std::ostringstream os;
  if (std::holds_alternative<Pts>(a)) {
    os << "{";
    const auto& ps = std::get<Pts>(a).pts;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (i) os << ",";
      os << ps[i].str();
    }
    os << "}";
  } else if (std::holds_alternative<AffImg>(a)) {
    const auto& f = std::get<AffImg>(a);
    os << "img(" << f.delta.str() << "; " << f.gamma.str() << "; " << f.beta.str() << ")";
  } else if (std::holds_alternative<NatAP>(a)) {
    const auto& ap = std::get<NatAP>(a);
    os << "ap(" << nat_str(ap.a) << "; " << nat_str(ap.d) << ")";
  } else if (std::holds_alternative<NatGeo>(a)) {
    const auto& g = std::get<NatGeo>(a);
    os << "geo(" << nat_str(g.c) << "; " << nat_str(g.q) << "; " << g.idx.str() << ")";
  } else {
    const auto& r = std::get<Rect>(a);
    os << "rect(" << r.row->str() << "; " << r.col->str() << ")";
  }
  return os.str();
}

std::string SetExpr::str() const {
  std::ostringstream os;
  auto list = [&](const std::vector<Atom>& as) {
    if (as.empty()) {
      os << "{}";
      return;
    }
    if (as.size() == 1) {
      os << atom_str(as[0]);
      return;
    }
    os << "u(";
    for (std::size_t i = 0; i < as.size(); ++i) {
      if (i) os << ", ";
      os << atom_str(as[i]);
    }
    os << ")";
  };
  if (!holes_.empty()) {
    os << "setminus(";
    list(atoms_);
    os << "; ";
    list(holes_);
    os << ")";
  } else {
    list(atoms_);
  }
  return os.str();
}

}  // namespace ordlab
