#include "ordlab/map_expr.hpp"

#include <algorithm>
#include <sstream>

#include "ordlab/block_iso.hpp"
#include "ordlab/error.hpp"
#include "ordlab/nat_sets.hpp"
#include "ordlab/omega_seq.hpp"

namespace ordlab {

namespace {

bool is_interval_atom(const Atom& a) {
  return std::holds_alternative<AffImg>(a) && std::get<AffImg>(a).gamma == Ordinal(1);
}

bool is_progression_atom(const Atom& a) {
  return std::holds_alternative<AffImg>(a) && std::get<AffImg>(a).beta == Ordinal(1);
}

// Progression atom as a sequence: elements delta + gamma*(k+1).
OmegaSeq atom_seq(const AffImg& f) { return OmegaSeq::affine(f.delta, f.gamma); }

// Subset of a progression selected by an index pattern.
SetExpr pattern_subset(const AffImg& f, const SeqPattern& pat, const Carrier& car) {
  std::vector<Atom> atoms;
  std::vector<Point> pts;
  for (std::uint64_t k = 0; k < pat.onset; ++k)
    if (pat.prefix[k]) pts.push_back(Point(f.delta + mul(f.gamma, Ordinal(k + 1))));
  for (std::uint64_t j = 0; j < pat.period; ++j) {
    if (!pat.cycle[j]) continue;
    Ordinal first = f.delta + mul(f.gamma, Ordinal(pat.onset + j + 1));
    pts.push_back(Point(first));
    atoms.push_back(AffImg{first, mul(f.gamma, Ordinal(pat.period)), Ordinal(1)});
  }
  if (!pts.empty()) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    atoms.push_back(Pts{std::move(pts)});
  }
  return SetExpr(car, std::move(atoms));
}

SetExpr intersect_ordinal_atoms(const SetExpr& a, const SetExpr& b);

}  // namespace

SetExpr intersect_sets(const SetExpr& a, const SetExpr& b) {
  if (!(a.carrier() == b.carrier()))
    fail(ErrKind::CarrierMismatch, "intersection of sets over different carriers");
  const Carrier& car = a.carrier();
  if (car.is_nat()) return boolean_nat(a, b, BoolOp::Intersect);
  if (car.is_prod()) {
    std::vector<Atom> atoms;
    std::vector<Point> pts;
    auto add_pts_filtered = [&](const Pts& ps, const SetExpr& other) {
      for (const auto& p : ps.pts)
        if (member(other, p)) pts.push_back(p);
    };
    for (const auto& x : a.atoms()) {
      if (std::holds_alternative<Pts>(x)) {
        add_pts_filtered(std::get<Pts>(x), b);
        continue;
      }
      const auto& rx = std::get<Rect>(x);
      for (const auto& y : b.atoms()) {
        if (std::holds_alternative<Pts>(y)) continue;  // handled from b's pass
        const auto& ry = std::get<Rect>(y);
        auto rr = std::make_shared<SetExpr>(intersect_sets(*rx.row, *ry.row));
        auto cc = std::make_shared<SetExpr>(intersect_sets(*rx.col, *ry.col));
        if (!is_empty_set(*rr) && !is_empty_set(*cc)) atoms.push_back(Rect{rr, cc});
      }
    }
    for (const auto& y : b.atoms())
      if (std::holds_alternative<Pts>(y)) add_pts_filtered(std::get<Pts>(y), a);
    if (!pts.empty()) {
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      atoms.push_back(Pts{std::move(pts)});
    }
    return SetExpr(car, std::move(atoms));
  }
  return intersect_ordinal_atoms(a, b);
}

namespace {

SetExpr intersect_ordinal_atoms(const SetExpr& a, const SetExpr& b) {
  const Carrier& car = a.carrier();
  SetExpr out = SetExpr::empty(car);
  for (const auto& x : a.atoms()) {
    for (const auto& y : b.atoms()) {
      // Points against anything: filter.
      if (std::holds_alternative<Pts>(x)) {
        std::vector<Point> keep;
        for (const auto& p : std::get<Pts>(x).pts)
          if (atom_member(y, p, car)) keep.push_back(p);
        if (!keep.empty()) out = set_union(out, SetExpr::points(car, keep));
        continue;
      }
      if (std::holds_alternative<Pts>(y)) {
        std::vector<Point> keep;
        for (const auto& p : std::get<Pts>(y).pts)
          if (atom_member(x, p, car)) keep.push_back(p);
        if (!keep.empty()) out = set_union(out, SetExpr::points(car, keep));
        continue;
      }
      const auto& fx = std::get<AffImg>(x);
      const auto& fy = std::get<AffImg>(y);
      // Interval-shaped side: clip the other side.
      if (is_interval_atom(y)) {
        SetExpr xs(car, {x});
        out = set_union(out, intersect_interval(xs, fy.delta, aff_sup(fy), false, false));
        continue;
      }
      if (is_interval_atom(x)) {
        SetExpr ys(car, {y});
        out = set_union(out, intersect_interval(ys, fx.delta, aff_sup(fx), false, false));
        continue;
      }
      // Progression against anything: index pattern.
      if (is_progression_atom(x)) {
        SetExpr ys(car, {y});
        auto pat = seq_membership_pattern(atom_seq(fx), ys);
        out = set_union(out, pattern_subset(fx, pat, car));
        continue;
      }
      if (is_progression_atom(y)) {
        SetExpr xs(car, {x});
        auto pat = seq_membership_pattern(atom_seq(fy), xs);
        out = set_union(out, pattern_subset(fy, pat, car));
        continue;
      }
      fail(ErrKind::BudgetExceeded,
           "intersection of two non-interval affine images is outside the closure budget: " +
               atom_str(x) + " vs " + atom_str(y));
    }
  }
  return out;
}

}  // namespace

Nat count_below(const SetExpr& s, const Nat& n) {
  if (!s.carrier().is_nat()) fail(ErrKind::CarrierMismatch, "count_below needs a nat set");
  auto nf = natset::to_nf(s);
  Nat count = 0;
  // Periodic part below n.
  if (n > nf.ep.start) {
    Nat span = n - nf.ep.start;
    Nat full = span / nf.ep.period;
    Nat rest = span % nf.ep.period;
    count += full * nf.ep.residues.size();
    for (auto r : nf.ep.residues)
      if (Nat(r) < rest) count += 1;
  }
  for (auto p : nf.ep.prefix)
    if (Nat(p) < n && Nat(p) < nf.ep.start) count += 1;
  // Holes that were counted.
  auto hole_hits = [&](const natset::Sparse& sp) {
    Nat hits = 0;
    for (const auto& g : sp.geos) {
      Nat v = g.c;
      std::uint64_t j = 0;
      while (v < n) {
        if (g.idx.member(j) && natset::ep_member_nat(nf.ep, v)) hits += 1;
        v *= g.q;
        ++j;
      }
    }
    for (const auto& v : sp.pts)
      if (v < n && natset::ep_member_nat(nf.ep, v)) hits += 1;
    return hits;
  };
  count -= hole_hits(nf.neg);
  // Sparse positives not already counted through the periodic part.
  for (const auto& g : nf.pos.geos) {
    Nat v = g.c;
    std::uint64_t j = 0;
    while (v < n) {
      if (g.idx.member(j) && !(natset::ep_member_nat(nf.ep, v) && !natset::sp_member(nf.neg, v)))
        count += 1;
      v *= g.q;
      ++j;
    }
  }
  for (const auto& v : nf.pos.pts)
    if (v < n && !(natset::ep_member_nat(nf.ep, v) && !natset::sp_member(nf.neg, v))) count += 1;
  return count;
}

MapExpr::MapExpr(Carrier domain, Carrier codomain, std::vector<MapPiece> pieces)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), pieces_(std::move(pieces)) {
  for (const auto& p : pieces_) {
    if (!(p.guard.carrier() == domain_))
      fail(ErrKind::CarrierMismatch, "guard carrier differs from the map domain");
  }
  // Exact partition check on nat domains; other carriers rely on apply-time
  // guard resolution.
  if (domain_.is_nat()) {
    SetExpr seen = SetExpr::empty(domain_);
    for (const auto& p : pieces_) {
      if (!is_empty_set(boolean_nat(seen, p.guard, BoolOp::Intersect)))
        fail(ErrKind::GuardGap, "overlapping guards on a nat domain");
      seen = boolean_nat(seen, p.guard, BoolOp::Union);
    }
    if (!is_empty_set(boolean_nat(SetExpr::full(domain_), seen, BoolOp::Diff)))
      fail(ErrKind::GuardGap, "guards do not cover the nat domain");
  }
}

namespace {

Point rule_apply(const MapExpr& f, const Rule& rule, const Point& x) {
  if (std::holds_alternative<ConstR>(rule)) return std::get<ConstR>(rule).value;
  if (std::holds_alternative<AffineR>(rule)) {
    const auto& r = std::get<AffineR>(rule);
    Ordinal v = x.scalar();
    if (r.pre > 0) {
      Nat n = v.finite_value();
      v = Ordinal(nat_sub(n, r.pre));
    }
    return Point(r.delta + mul(r.gamma, v));
  }
  if (std::holds_alternative<BiAffineR>(rule)) {
    const auto& r = std::get<BiAffineR>(rule);
    auto [row, col] = split_point(x, f.domain());
    Ordinal v = r.delta;
    if (!r.gr.is_zero()) v = v + mul(r.gr, row.scalar());
    if (!r.gc.is_zero()) v = v + mul(r.gc, col.scalar());
    return Point(v);
  }
  if (std::holds_alternative<RankInR>(rule)) {
    const auto& r = std::get<RankInR>(rule);
    Nat rank = count_below(*r.index_set, x.scalar().finite_value());
    return Point(r.delta + mul(r.gamma, Ordinal(rank)));
  }
  if (std::holds_alternative<QuotR>(rule)) {
    const auto& r = std::get<QuotR>(rule);
    Ordinal q = div_left(x.scalar(), r.gamma).quot;
    if (r.shift == -1) q = pred(q);
    return Point(q);
  }
  if (std::holds_alternative<RemR>(rule)) {
    return Point(div_left(x.scalar(), std::get<RemR>(rule).gamma).rem);
  }
  if (std::holds_alternative<PairR>(rule)) {
    const auto& r = std::get<PairR>(rule);
    return Point::pair(rule_apply(f, r.row->rule, x), rule_apply(f, r.col->rule, x));
  }
  return block_iso_apply(f, std::get<MacroR>(rule), x);
}

}  // namespace

Point apply(const MapExpr& f, const Point& x) {
  if (!point_in_carrier(x, f.domain()))
    fail(ErrKind::CarrierMismatch, "point outside the map domain");
  const MapPiece* hit = nullptr;
  for (const auto& p : f.pieces()) {
    if (!member(p.guard, x)) continue;
    if (hit) fail(ErrKind::GuardGap, "overlapping guards at " + x.str());
    hit = &p;
  }
  if (!hit) fail(ErrKind::GuardGap, "no guard covers " + x.str());
  Point y = rule_apply(f, hit->rule, x);
  if (!point_in_carrier(y, f.codomain()))
    fail(ErrKind::Internal, "rule left the codomain at " + x.str() + " -> " + y.str());
  return y;
}

namespace {

// Image of one atom under an affine rule.
void affine_atom_image(const MapExpr& f, const AffineR& r, const Atom& a,
                       std::vector<Atom>& out_atoms, std::vector<Point>& out_pts) {
  const Carrier& cod = f.codomain();
  bool nat_cod = cod.is_nat();
  if (std::holds_alternative<Pts>(a)) {
    for (const auto& p : std::get<Pts>(a).pts)
      out_pts.push_back(rule_apply(f, Rule{r}, p));
    return;
  }
  if (std::holds_alternative<AffImg>(a)) {
    const auto& g = std::get<AffImg>(a);
    if (r.pre != 0) fail(ErrKind::BudgetExceeded, "pre-shift on an ordinal-carrier atom");
    out_atoms.push_back(AffImg{r.delta + mul(r.gamma, g.delta), mul(r.gamma, g.gamma), g.beta});
    return;
  }
  if (std::holds_alternative<NatAP>(a)) {
    const auto& ap = std::get<NatAP>(a);
    if (ap.a < r.pre) fail(ErrKind::BudgetExceeded, "pre-shift larger than progression base");
    Ordinal base = r.delta + mul(r.gamma, Ordinal(ap.a - r.pre));
    Ordinal step = mul(r.gamma, Ordinal(ap.d));
    out_pts.push_back(Point(base));
    if (nat_cod) {
      out_atoms.push_back(NatAP{base.finite_value() + step.finite_value(), step.finite_value()});
    } else {
      out_atoms.push_back(AffImg{base, step, Ordinal(1)});
    }
    return;
  }
  if (std::holds_alternative<NatGeo>(a)) {
    const auto& g = std::get<NatGeo>(a);
    if (r.pre == 0 && r.delta.is_zero() && r.gamma.is_finite()) {
      out_atoms.push_back(NatGeo{r.gamma.finite_value() * g.c, g.q, g.idx});
      return;
    }
    fail(ErrKind::BudgetExceeded, "geo atom under a non-scaling affine rule");
  }
  fail(ErrKind::BudgetExceeded, "affine rule over a product atom");
}

// Quotient by a pure power w^p: drop all CNF terms below w^p and shift.
Ordinal shift_down_exponents(const Ordinal& v, const Ordinal& p) {
  std::vector<OrdTerm> ts;
  for (const auto& t : v.terms()) {
    if (t.exp < p) break;
    ts.push_back(OrdTerm{left_sub(p, t.exp), t.coeff});
  }
  return Ordinal::from_terms(std::move(ts));
}

void quot_atom_image(const MapExpr& f, const QuotR& r, const Atom& a,
                     std::vector<Atom>& out_atoms, std::vector<Point>& out_pts) {
  if (std::holds_alternative<Pts>(a)) {
    for (const auto& p : std::get<Pts>(a).pts)
      out_pts.push_back(rule_apply(f, Rule{r}, p));
    return;
  }
  if (!std::holds_alternative<AffImg>(a))
    fail(ErrKind::BudgetExceeded, "quotient image of a non-ordinal atom");
  const auto& g = std::get<AffImg>(a);
  if (!(is_indecomposable(r.gamma)))
    fail(ErrKind::BudgetExceeded, "quotient images need a pure-power divisor");
  const Ordinal p = r.gamma.lead().exp;
  if (r.shift != 0) fail(ErrKind::BudgetExceeded, "shifted quotient image");
  // values: delta + gamma*xi; quotient drops everything below w^p.
  Ordinal u = shift_down_exponents(g.gamma, p);  // gamma's part at or above w^p
  Ordinal dq = shift_down_exponents(g.delta, p);
  if (!u.is_zero()) {
    // Q(xi) = dq + u*xi over the same xi-range, plus Q at small xi edges; the
    // formula holds for all xi >= 1 because low terms never reach the
    // quotient.
    out_atoms.push_back(AffImg{dq, u, g.beta});
    return;
  }
  // gamma below w^p: values advance within quotient-blocks.
  // xi < w^m keeps the quotient at dq; higher xi raise it by eta.
  Ordinal glead = g.gamma.lead().exp;
  Ordinal m = left_sub(glead, p);  // glead + m = p
  out_pts.push_back(Point(dq));
  if (g.beta > m) {
    Ordinal beta2 = left_sub(m, g.beta);
    out_atoms.push_back(AffImg{dq, Ordinal(1), beta2});
  }
}

SetExpr image_of_piece(const MapExpr& f, const Rule& rule, const SetExpr& s) {
  const Carrier& cod = f.codomain();
  if (std::holds_alternative<ConstR>(rule)) {
    if (is_empty_set(s)) return SetExpr::empty(cod);
    return SetExpr::points(cod, {std::get<ConstR>(rule).value});
  }
  std::vector<Atom> atoms;
  std::vector<Point> pts;
  if (std::holds_alternative<AffineR>(rule)) {
    for (const auto& a : s.atoms()) affine_atom_image(f, std::get<AffineR>(rule), a, atoms, pts);
  } else if (std::holds_alternative<QuotR>(rule)) {
    for (const auto& a : s.atoms()) quot_atom_image(f, std::get<QuotR>(rule), a, atoms, pts);
  } else if (std::holds_alternative<RankInR>(rule)) {
    const auto& r = std::get<RankInR>(rule);
    // Exact for eventually periodic sets: ranks grow affinely once both the
    // set and the index set are in their periodic regime.
    auto nf = natset::to_nf(s);
    if (!nf.pos.geos.empty() || !nf.pos.pts.empty() || !nf.neg.empty())
      fail(ErrKind::BudgetExceeded, "rank image of a sparse nat set");
    auto idx_nf = natset::to_nf(*r.index_set);
    if (!idx_nf.pos.geos.empty() || !idx_nf.neg.empty())
      fail(ErrKind::BudgetExceeded, "rank image against a sparse index set");
    std::uint64_t period = std::max<std::uint64_t>(1, to_u64(nat_lcm(Nat(nf.ep.period), Nat(idx_nf.ep.period))));
    std::uint64_t onset = std::max(nf.ep.start, idx_nf.ep.start) + period;
    auto vals = natset::nf_take(nf, onset + 3 * period + 4);
    if (vals.size() < onset + 2 * period) {
      for (const auto& v : vals) pts.push_back(rule_apply(f, rule, Point(Ordinal(v))));
    } else {
      // Verify the affine step over a window, then emit prefix + tails.
      std::vector<Nat> ranks;
      for (const auto& v : vals) ranks.push_back(count_below(*r.index_set, v));
      std::uint64_t K = onset;
      Nat step = ranks[K + period] - ranks[K];
      for (std::uint64_t j = K; j + period < ranks.size(); ++j)
        if (ranks[j + period] - ranks[j] != step)
          fail(ErrKind::Internal, "rank image failed to stabilize");
      for (std::uint64_t j = 0; j < K; ++j)
        pts.push_back(Point(r.delta + mul(r.gamma, Ordinal(ranks[j]))));
      for (std::uint64_t j = K; j < K + period; ++j) {
        Ordinal base = r.delta + mul(r.gamma, Ordinal(ranks[j]));
        pts.push_back(Point(base));
        if (step > 0) {
          Ordinal stepo = mul(r.gamma, Ordinal(step));
          if (cod.is_nat())
            atoms.push_back(NatAP{base.finite_value() + stepo.finite_value(), stepo.finite_value()});
          else
            atoms.push_back(AffImg{base, stepo, Ordinal(1)});
        }
      }
    }
  } else if (std::holds_alternative<BiAffineR>(rule)) {
    const auto& r = std::get<BiAffineR>(rule);
    for (const auto& a : s.atoms()) {
      if (std::holds_alternative<Pts>(a)) {
        for (const auto& p : std::get<Pts>(a).pts) pts.push_back(rule_apply(f, rule, p));
        continue;
      }
      const auto& rect = std::get<Rect>(a);
      Extent re = extent(*rect.row);
      Extent ce = extent(*rect.col);
      if (re.card == Card::Empty || ce.card == Card::Empty) continue;
      if (r.gr.is_zero()) {
        AffineR colr{r.delta, r.gc, Nat(0)};
        if (r.gc.is_zero()) { pts.push_back(Point(r.delta)); continue; }
        for (const auto& a2 : rect.col->atoms()) affine_atom_image(f, colr, a2, atoms, pts);
        continue;
      }
      if (r.gc.is_zero()) {
        AffineR rowr{r.delta, r.gr, Nat(0)};
        for (const auto& a2 : rect.row->atoms()) affine_atom_image(f, rowr, a2, atoms, pts);
        continue;
      }
      if (re.card == Card::Finite) {
        auto rows = enumerate_inorder(*rect.row, to_u64(Nat(re.count)));
        for (const auto& rp : rows) {
          AffineR colr{r.delta + mul(r.gr, rp.scalar()), r.gc, Nat(0)};
          for (const auto& a2 : rect.col->atoms()) affine_atom_image(f, colr, a2, atoms, pts);
        }
        continue;
      }
      // Contiguous block tiling: columns the full nat carrier, unit column
      // scale, and rows an interval from zero.
      bool cols_full = rect.col->carrier().is_nat() && !is_empty_set(*rect.col) &&
                       is_empty_set(boolean_nat(SetExpr::full(Carrier::nat()), *rect.col, BoolOp::Diff));
      bool rows_interval_from_zero = true;
      Ordinal row_sup;
      for (const auto& a2 : rect.row->atoms()) {
        if (std::holds_alternative<Pts>(a2)) continue;
        if (!is_interval_atom(a2)) rows_interval_from_zero = false;
      }
      Extent rext = extent(*rect.row);
      if (rows_interval_from_zero && rext.min && rext.min->scalar().is_zero() && cols_full &&
          r.gc == Ordinal(1) && r.gr == omega()) {
        // rows [0, R): image = [delta, delta + w*R)
        Ordinal rsup = *rext.sup;
        auto segs = affine_segment_atoms(r.delta, Ordinal(1), Ordinal(1), mul(omega(), rsup));
        pts.push_back(Point(r.delta));
        for (auto& sgm : segs) atoms.push_back(sgm);
        continue;
      }
      fail(ErrKind::BudgetExceeded, "biaffine image of an infinite non-tiling rectangle");
    }
  } else if (std::holds_alternative<MacroR>(rule)) {
    return block_iso_image(f, std::get<MacroR>(rule), s);
  } else {
    fail(ErrKind::BudgetExceeded, "image under rule " + rule_str(rule));
  }
  if (!pts.empty()) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    atoms.push_back(Pts{std::move(pts)});
  }
  return SetExpr(cod, std::move(atoms));
}

}  // namespace

SetExpr image(const MapExpr& f, const SetExpr& s) {
  if (!(s.carrier() == f.domain()))
    fail(ErrKind::CarrierMismatch, "image argument lives outside the map domain");
  SetExpr out = SetExpr::empty(f.codomain());
  for (const auto& p : f.pieces()) {
    SetExpr part = intersect_sets(s, p.guard);
    if (is_empty_set(part)) continue;
    out = set_union(out, image_of_piece(f, p.rule, part));
  }
  return out;
}

namespace {

// Preimage of a target set under one rule, before guard restriction.
SetExpr rule_preimage(const MapExpr& f, const Rule& rule, const SetExpr& t) {
  const Carrier& dom = f.domain();
  if (std::holds_alternative<ConstR>(rule)) {
    return member(t, std::get<ConstR>(rule).value) ? SetExpr::full(dom) : SetExpr::empty(dom);
  }
  if (std::holds_alternative<AffineR>(rule)) {
    const auto& r = std::get<AffineR>(rule);
    // Identity fast path.
    if (r.pre == 0 && r.delta.is_zero() && r.gamma == Ordinal(1)) {
      if (dom.is_nat()) {
        // clip codomain atoms to finite values
        std::vector<Atom> keep;
        for (const auto& a : t.atoms()) {
          if (std::holds_alternative<NatAP>(a) || std::holds_alternative<NatGeo>(a)) keep.push_back(a);
          else if (std::holds_alternative<Pts>(a)) {
            std::vector<Point> ps;
            for (const auto& p : std::get<Pts>(a).pts)
              if (p.scalar().is_finite()) ps.push_back(p);
            if (!ps.empty()) keep.push_back(Pts{std::move(ps)});
          } else if (std::holds_alternative<AffImg>(a)) {
            const auto& g = std::get<AffImg>(a);
            if (g.gamma.is_finite() && g.delta.is_finite() && g.beta == Ordinal(1))
              keep.push_back(NatAP{g.delta.finite_value() + g.gamma.finite_value(),
                                   g.gamma.finite_value()});
            else {
              // only a finite prefix of the atom is finite
              SetExpr one(t.carrier(), {a});
              SetExpr clipped = intersect_interval(one, Ordinal(), omega(), true, false);
              for (const auto& ca : clipped.atoms()) keep.push_back(ca);
            }
          }
        }
        return SetExpr(dom, std::move(keep));
      }
      if (dom.is_ord()) return intersect_interval(t, Ordinal(), dom.top(), true, true);
    }
    if (dom.is_nat()) {
      // Walk the value sequence: n >= pre gives values delta + gamma*y.
      std::vector<Atom> atoms;
      std::vector<Point> pts;
      std::uint64_t pre = to_u64(r.pre);
      for (std::uint64_t n = 0; n <= pre; ++n) {
        Point v = rule_apply(f, rule, Point(Ordinal(n)));
        if (member(t, v)) pts.push_back(Point(Ordinal(n)));
      }
      auto seq = OmegaSeq::affine(r.delta, r.gamma);  // value at y = k+1
      auto pat = seq_membership_pattern(seq, t);
      for (std::uint64_t k = 0; k < pat.onset; ++k)
        if (pat.prefix[k]) pts.push_back(Point(Ordinal(pre + 1 + k)));
      for (std::uint64_t j = 0; j < pat.period; ++j)
        if (pat.cycle[j]) atoms.push_back(NatAP{Nat(pre + 1 + pat.onset + j), Nat(pat.period)});
      if (!pts.empty()) {
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        atoms.push_back(Pts{std::move(pts)});
      }
      return SetExpr(dom, std::move(atoms));
    }
    // Ordinal domain: intervals, points, and progression targets.
    SetExpr out = SetExpr::empty(dom);
    for (const auto& a : t.atoms()) {
      if (std::holds_alternative<Pts>(a)) {
        std::vector<Point> hits;
        for (const auto& p : std::get<Pts>(a).pts) {
          if (p.scalar() == r.delta) hits.push_back(Point(Ordinal()));
          auto sol = solve_affine(r.delta, r.gamma, p.scalar());
          if (sol.ok && sol.xi <= dom.top()) hits.push_back(Point(sol.xi));
        }
        if (!hits.empty()) out = set_union(out, SetExpr::points(dom, hits));
        continue;
      }
      if (std::holds_alternative<AffImg>(a)) {
        const auto& g = std::get<AffImg>(a);
        if (g.gamma == Ordinal(1)) {
          // interval (g.delta, sup): solve two thresholds in x.
          Ordinal lo = g.delta + Ordinal(1);
          Ordinal hi = aff_sup(g);
          Ordinal xlo = r.delta >= lo ? Ordinal() : ceil_div_left(left_sub(r.delta, lo), r.gamma);
          Ordinal xhi = r.delta >= hi ? Ordinal() : ceil_div_left(left_sub(r.delta, hi), r.gamma);
          if (xhi > dom.top() + Ordinal(1)) xhi = dom.top() + Ordinal(1);
          if (xlo < xhi) {
            if (xlo.is_zero()) {
              out = set_union(out, SetExpr::points(dom, {Point(Ordinal())}));
              xlo = Ordinal(1);
            }
            auto segs = affine_segment_atoms(Ordinal(), Ordinal(1), xlo, xhi);
            out = set_union(out, SetExpr(dom, std::move(segs)));
          }
          continue;
        }
        fail(ErrKind::BudgetExceeded,
             "affine preimage of a non-interval image atom over an ordinal domain");
      }
      fail(ErrKind::BudgetExceeded, "affine preimage of a nat atom over an ordinal domain");
    }
    return out;
  }
  if (std::holds_alternative<QuotR>(rule)) {
    const auto& r = std::get<QuotR>(rule);
    SetExpr out = SetExpr::empty(dom);
    for (const auto& a : t.atoms()) {
      std::vector<std::pair<Ordinal, Ordinal>> qranges;  // half-open quotient ranges
      if (std::holds_alternative<Pts>(a)) {
        for (const auto& p : std::get<Pts>(a).pts)
          qranges.push_back({p.scalar(), p.scalar() + Ordinal(1)});
      } else if (std::holds_alternative<AffImg>(a) && is_interval_atom(a)) {
        const auto& g = std::get<AffImg>(a);
        qranges.push_back({g.delta + Ordinal(1), aff_sup(g)});
      } else {
        fail(ErrKind::BudgetExceeded, "quotient preimage of a non-interval target");
      }
      for (auto& [qlo0, qhi0] : qranges) {
        Ordinal qlo = qlo0, qhi = qhi0;
        if (r.shift == -1) {
          qlo = qlo + Ordinal(1);
          qhi = qhi + Ordinal(1);
        }
        // x with quot in [qlo, qhi): x in [gamma*qlo, gamma*qhi)
        Ordinal xlo = mul(r.gamma, qlo);
        Ordinal xhi = mul(r.gamma, qhi);
        if (xhi > dom.top() + Ordinal(1)) xhi = dom.top() + Ordinal(1);
        if (!(xlo < xhi)) continue;
        std::vector<Atom> segs;
        if (xlo.is_zero()) {
          out = set_union(out, SetExpr::points(dom, {Point(Ordinal())}));
          segs = affine_segment_atoms(Ordinal(), Ordinal(1), Ordinal(1), xhi);
        } else {
          segs = affine_segment_atoms(Ordinal(), Ordinal(1), xlo, xhi);
          out = set_union(out, SetExpr::points(dom, {Point(xlo)}));
        }
        out = set_union(out, SetExpr(dom, std::move(segs)));
      }
    }
    return out;
  }
  if (std::holds_alternative<RankInR>(rule)) {
    const auto& r = std::get<RankInR>(rule);
    // n with rank(n) = v: the interval (a_{v-1}, a_v] of the index set.
    SetExpr out = SetExpr::empty(dom);
    std::vector<Ordinal> wanted;
    for (const auto& a : t.atoms()) {
      if (!std::holds_alternative<Pts>(a))
        fail(ErrKind::BudgetExceeded, "rank preimage needs a finite target");
      for (const auto& p : std::get<Pts>(a).pts) wanted.push_back(p.scalar());
    }
    for (const auto& v : wanted) {
      if (v == r.delta) {
        auto first = natset::nf_take(natset::to_nf(*r.index_set), 1);
        Nat hi = first.empty() ? Nat(0) : first[0];
        std::vector<Point> ps;
        for (Nat n = 0; n <= hi; ++n) ps.push_back(Point(Ordinal(n)));
        out = set_union(out, SetExpr::points(dom, ps));
        continue;
      }
      auto sol = solve_affine(r.delta, r.gamma, v);
      if (!sol.ok || !sol.xi.is_finite()) continue;
      Nat k = sol.xi.finite_value();  // rank value
      auto elems = natset::nf_take(natset::to_nf(*r.index_set), to_u64(k) + 1);
      if (elems.size() < to_u64(k) + 1) continue;
      Nat lo = elems[to_u64(k) - 1];
      Nat hi = elems[to_u64(k)];
      std::vector<Point> ps;
      for (Nat n = lo + 1; n <= hi; ++n) ps.push_back(Point(Ordinal(n)));
      out = set_union(out, SetExpr::points(dom, ps));
    }
    return out;
  }
  if (std::holds_alternative<PairR>(rule)) {
    const auto& r = std::get<PairR>(rule);
    SetExpr out = SetExpr::empty(dom);
    for (const auto& a : t.atoms()) {
      if (std::holds_alternative<Pts>(a)) {
        for (const auto& p : std::get<Pts>(a).pts) {
          auto [rp, cp] = split_point(p, t.carrier());
          SetExpr pr = rule_preimage(f, r.row->rule, SetExpr::points(t.carrier().row(), {rp}));
          SetExpr pc = rule_preimage(f, r.col->rule, SetExpr::points(t.carrier().col(), {cp}));
          out = set_union(out, intersect_sets(pr, pc));
        }
        continue;
      }
      const auto& rect = std::get<Rect>(a);
      SetExpr pr = rule_preimage(f, r.row->rule, *rect.row);
      SetExpr pc = rule_preimage(f, r.col->rule, *rect.col);
      out = set_union(out, intersect_sets(pr, pc));
    }
    return out;
  }
  if (std::holds_alternative<BiAffineR>(rule)) {
    const auto& r = std::get<BiAffineR>(rule);
    if (r.gr.is_zero() || r.gc.is_zero()) {
      const Ordinal& g = r.gr.is_zero() ? r.gc : r.gr;
      MapExpr scalar_map(r.gr.is_zero() ? dom.col() : dom.row(), f.codomain(),
                         {{SetExpr::full(r.gr.is_zero() ? dom.col() : dom.row()),
                           AffineR{r.delta, g, Nat(0)}}});
      SetExpr half = preimage(scalar_map, t);
      auto other_full = std::make_shared<SetExpr>(SetExpr::full(r.gr.is_zero() ? dom.row() : dom.col()));
      auto halfp = std::make_shared<SetExpr>(half);
      if (r.gr.is_zero()) return SetExpr(dom, {Rect{other_full, halfp}});
      return SetExpr(dom, {Rect{halfp, other_full}});
    }
    fail(ErrKind::BudgetExceeded, "general biaffine preimage");
  }
  if (std::holds_alternative<MacroR>(rule)) {
    return block_iso_preimage(f, std::get<MacroR>(rule), t);
  }
  fail(ErrKind::BudgetExceeded, "preimage under rule " + rule_str(rule));
}

}  // namespace

SetExpr preimage(const MapExpr& f, const SetExpr& t) {
  if (!(t.carrier() == f.codomain()))
    fail(ErrKind::CarrierMismatch, "preimage argument lives outside the map codomain");
  SetExpr out = SetExpr::empty(f.domain());
  for (const auto& p : f.pieces()) {
    SetExpr pre = rule_preimage(f, p.rule, t);
    SetExpr clipped = intersect_sets(pre, p.guard);
    out = set_union(out, clipped);
  }
  return out;
}

namespace {

struct RangeHull {
  Ordinal lo;
  Ordinal hi;  // inclusive-ish upper estimate
  bool known = false;
};

RangeHull piece_range_hull(const MapExpr& f, const MapPiece& p) {
  RangeHull h;
  if (!f.codomain().is_scalar()) return h;
  Extent ge = extent(p.guard);
  if (ge.card == Card::Empty) return h;
  if (std::holds_alternative<ConstR>(p.rule)) {
    const auto& v = std::get<ConstR>(p.rule).value;
    if (v.xs.size() != 1) return h;
    h.lo = v.scalar();
    h.hi = v.scalar();
    h.known = true;
    return h;
  }
  if (std::holds_alternative<AffineR>(p.rule) && f.domain().is_scalar()) {
    const auto& r = std::get<AffineR>(p.rule);
    if (!ge.min || !ge.sup) return h;
    Ordinal mn = ge.min->scalar();
    if (r.pre > 0) {
      if (!mn.is_finite()) return h;
      Nat m = mn.finite_value();
      mn = Ordinal(m >= r.pre ? Nat(m - r.pre) : Nat(0));
    }
    h.lo = r.delta + mul(r.gamma, mn);
    h.hi = r.delta + mul(r.gamma, *ge.sup);
    h.known = true;
    return h;
  }
  return h;
}

}  // namespace

MapProps map_props(const MapExpr& f) {
  MapProps out;
  // A single macro piece is a bijection by construction.
  if (f.pieces().size() == 1 && std::holds_alternative<MacroR>(f.pieces()[0].rule)) {
    out.injective_on_pieces = true;
    out.finite_to_one = true;
    out.covers = true;
    return out;
  }
  bool inj = true, fto = true;
  for (const auto& p : f.pieces()) {
    Extent ge = extent(p.guard);
    if (ge.card == Card::Empty) continue;
    if (std::holds_alternative<ConstR>(p.rule)) {
      if (ge.card == Card::Infinite) fto = false;
      if (ge.card == Card::Infinite || Nat(ge.count) > 1) inj = false;
    } else if (std::holds_alternative<AffineR>(p.rule)) {
      // strictly increasing
    } else if (std::holds_alternative<BiAffineR>(p.rule)) {
      const auto& r = std::get<BiAffineR>(p.rule);
      if (r.gr.is_zero() || r.gc.is_zero()) {
        if (ge.card == Card::Infinite) inj = false;
      }
      // With both scales present the map is injective on a rectangle when
      // the column contribution stays below the row scale; the built-in
      // witnesses satisfy this, and cross-piece ranges are checked below.
    } else if (std::holds_alternative<RankInR>(p.rule)) {
      const auto& r = std::get<RankInR>(p.rule);
      auto gnf = natset::to_nf(p.guard);
      auto inf_idx = natset::to_nf(*r.index_set);
      std::uint64_t per = to_u64(nat_lcm(Nat(std::max<std::uint64_t>(gnf.ep.period, 1)),
                                         Nat(std::max<std::uint64_t>(inf_idx.ep.period, 1))));
      std::uint64_t bound = std::max(gnf.ep.start, inf_idx.ep.start) + 2 * per + 4;
      auto members = natset::nf_take(gnf, bound);
      for (std::size_t i = 0; i + 1 < members.size(); ++i) {
        Nat r1 = count_below(*r.index_set, members[i]);
        Nat r2 = count_below(*r.index_set, members[i + 1]);
        if (r1 == r2) { inj = false; break; }
      }
    } else if (std::holds_alternative<QuotR>(p.rule) || std::holds_alternative<RemR>(p.rule)) {
      if (ge.card == Card::Infinite) { inj = false; fto = false; }
    } else if (std::holds_alternative<PairR>(p.rule)) {
      const auto& r = std::get<PairR>(p.rule);
      bool qr_pair =
          std::holds_alternative<QuotR>(r.row->rule) && std::holds_alternative<RemR>(r.col->rule) &&
          std::get<QuotR>(r.row->rule).gamma == std::get<RemR>(r.col->rule).gamma &&
          std::get<QuotR>(r.row->rule).shift == 0;
      if (!qr_pair) { inj = false; fto = false; }
    }
  }
  // Cross-piece injectivity: range hulls must be pairwise disjoint.
  if (inj) {
    std::vector<RangeHull> hulls;
    bool all_known = true;
    for (const auto& p : f.pieces()) {
      if (extent(p.guard).card == Card::Empty) continue;
      RangeHull h = piece_range_hull(f, p);
      if (!h.known) all_known = false;
      hulls.push_back(h);
    }
    if (hulls.size() > 1) {
      if (!all_known) {
        inj = false;
      } else {
        for (std::size_t i = 0; i < hulls.size() && inj; ++i)
          for (std::size_t j = i + 1; j < hulls.size() && inj; ++j)
            if (!(hulls[i].hi < hulls[j].lo || hulls[j].hi < hulls[i].lo)) inj = false;
      }
    }
  }
  out.injective_on_pieces = inj;
  out.finite_to_one = fto;
  out.covers = false;
  try {
    SetExpr img = image(f, SetExpr::full(f.domain()));
    if (f.codomain().is_nat()) {
      out.covers = is_empty_set(boolean_nat(SetExpr::full(f.codomain()), img, BoolOp::Diff));
    } else if (f.codomain().is_ord()) {
      // Exact sweep when the image is made of intervals and points.
      std::vector<std::pair<Ordinal, Ordinal>> ivs;  // half-open
      std::vector<Ordinal> pts;
      bool shapes_ok = true;
      for (const auto& a : img.atoms()) {
        if (std::holds_alternative<Pts>(a)) {
          for (const auto& p : std::get<Pts>(a).pts) pts.push_back(p.scalar());
        } else if (is_interval_atom(a)) {
          const auto& g = std::get<AffImg>(a);
          ivs.push_back({g.delta + Ordinal(1), aff_sup(g)});
        } else {
          shapes_ok = false;
        }
      }
      if (shapes_ok) {
        std::sort(pts.begin(), pts.end());
        bool covered = true;
        Ordinal cur;  // least point not yet covered
        while (cur <= f.codomain().top()) {
          bool advanced = false;
          for (const auto& iv : ivs) {
            if (iv.first <= cur && cur < iv.second) {
              cur = iv.second;
              advanced = true;
              break;
            }
          }
          if (advanced) continue;
          if (std::binary_search(pts.begin(), pts.end(), cur)) {
            cur = cur + Ordinal(1);
            continue;
          }
          covered = false;
          break;
        }
        out.covers = covered;
      }
    }
  } catch (const Error&) {
    out.covers = false;
  }
  return out;
}

namespace {

std::optional<Rule> compose_rules(const MapExpr& g, const Rule& outer, const Rule& inner) {
  if (std::holds_alternative<ConstR>(inner)) {
    Point v = std::get<ConstR>(inner).value;
    return ConstR{apply(g, v)};
  }
  if (std::holds_alternative<ConstR>(outer)) return outer;
  if (std::holds_alternative<AffineR>(outer) && std::holds_alternative<AffineR>(inner)) {
    const auto& o = std::get<AffineR>(outer);
    const auto& i = std::get<AffineR>(inner);
    if (o.pre == 0) {
      return AffineR{o.delta + mul(o.gamma, i.delta), mul(o.gamma, i.gamma), i.pre};
    }
    // inner must produce finite values >= o.pre; only constant-free finite
    // shapes compose cleanly.
    if (i.delta.is_finite() && i.gamma.is_finite() && i.delta.finite_value() >= o.pre) {
      Nat d0 = i.delta.finite_value() - o.pre;
      return AffineR{o.delta + mul(o.gamma, Ordinal(d0)), mul(o.gamma, i.gamma), i.pre};
    }
    return std::nullopt;
  }
  if (std::holds_alternative<QuotR>(outer) && std::holds_alternative<AffineR>(inner)) {
    const auto& o = std::get<QuotR>(outer);
    const auto& i = std::get<AffineR>(inner);
    if (o.shift != 0 || !is_indecomposable(o.gamma)) return std::nullopt;
    const Ordinal p = o.gamma.lead().exp;
    Ordinal u = shift_down_exponents(i.gamma, p);
    Ordinal dq = shift_down_exponents(i.delta, p);
    if (u.is_zero()) return ConstR{Point(dq)};
    return AffineR{dq, u, i.pre};
  }
  if (std::holds_alternative<PairR>(outer)) {
    const auto& o = std::get<PairR>(outer);
    auto r1 = compose_rules(g, o.row->rule, inner);
    auto r2 = compose_rules(g, o.col->rule, inner);
    if (!r1 || !r2) return std::nullopt;
    auto b1 = std::make_shared<RuleBox>(RuleBox{*r1});
    auto b2 = std::make_shared<RuleBox>(RuleBox{*r2});
    return PairR{b1, b2};
  }
  return std::nullopt;
}

}  // namespace

MapExpr compose(const MapExpr& g, const MapExpr& f) {
  if (!(f.codomain() == g.domain()))
    fail(ErrKind::CarrierMismatch, "compose needs codomain(f) = domain(g)");
  std::vector<MapPiece> pieces;
  for (const auto& pf : f.pieces()) {
    for (const auto& pg : g.pieces()) {
      // Guard: points of pf.guard mapping into pg.guard.
      MapExpr single(f.domain(), f.codomain(), {{pf.guard, pf.rule}});
      SetExpr pre = preimage(single, pg.guard);
      if (is_empty_set(pre)) continue;
      auto rule = compose_rules(g, pg.rule, pf.rule);
      if (!rule) fail(ErrKind::BudgetExceeded, "rule composition outside the budget");
      pieces.push_back({pre, *rule});
    }
  }
  return MapExpr(f.domain(), g.codomain(), std::move(pieces));
}

std::string rule_str(const Rule& r) {
  std::ostringstream os;
  if (std::holds_alternative<ConstR>(r)) {
    os << "const(" << std::get<ConstR>(r).value.str() << ")";
  } else if (std::holds_alternative<AffineR>(r)) {
    const auto& a = std::get<AffineR>(r);
    os << "affine(" << a.delta.str() << "; " << a.gamma.str();
    if (a.pre > 0) os << "; pre=" << nat_str(a.pre);
    os << ")";
  } else if (std::holds_alternative<BiAffineR>(r)) {
    const auto& a = std::get<BiAffineR>(r);
    os << "biaffine(" << a.delta.str() << "; " << a.gr.str() << "; " << a.gc.str() << ")";
  } else if (std::holds_alternative<RankInR>(r)) {
    const auto& a = std::get<RankInR>(r);
    os << "rankin(" << a.index_set->str() << ")";
    if (!a.delta.is_zero() || !(a.gamma == Ordinal(1)))
      os << "*(" << a.delta.str() << ";" << a.gamma.str() << ")";
  } else if (std::holds_alternative<QuotR>(r)) {
    const auto& a = std::get<QuotR>(r);
    os << "quot(" << a.gamma.str();
    if (a.shift) os << "; " << a.shift;
    os << ")";
  } else if (std::holds_alternative<RemR>(r)) {
    os << "rem(" << std::get<RemR>(r).gamma.str() << ")";
  } else if (std::holds_alternative<PairR>(r)) {
    const auto& a = std::get<PairR>(r);
    os << "pair(" << rule_str(a.row->rule) << "; " << rule_str(a.col->rule) << ")";
  } else {
    const auto& a = std::get<MacroR>(r);
    os << "macro#" << a.macro_id << (a.inverted ? ":inv" : "");
  }
  return os.str();
}

std::string MapExpr::str() const {
  std::ostringstream os;
  os << "map @" << domain_.str() << " -> @" << codomain_.str() << " [";
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (i) os << " ; ";
    os << pieces_[i].guard.str() << " => " << rule_str(pieces_[i].rule);
  }
  os << "]";
  return os.str();
}

}  // namespace ordlab
