#include "ordlab/nat_sets.hpp"

#include <algorithm>
#include <map>

#include "ordlab/error.hpp"

namespace ordlab::natset {

namespace {

constexpr std::uint64_t kSmallValueCap = 1ull << 32;
constexpr std::uint64_t kStepCap = 1ull << 20;

bool nat_small(const Nat& v) { return v < kSmallValueCap; }

std::vector<std::uint64_t> prime_factors(Nat n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; Nat(p) * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
    if (p > 1000000) fail(ErrKind::BudgetExceeded, "factorization budget exceeded");
  }
  if (n > 1) {
    if (!nat_small(n)) fail(ErrKind::BudgetExceeded, "prime factor too large");
    out.push_back(to_u64(n));
  }
  return out;
}

std::uint64_t val_p(Nat n, std::uint64_t p, Nat* core = nullptr) {
  std::uint64_t v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  if (core) *core = n;
  return v;
}

// Merge geos with identical (c, q) by index union.
void push_geo(std::vector<NatGeo>& gs, NatGeo g) {
  if (g.idx.is_empty()) return;
  for (auto& h : gs) {
    if (h.c == g.c && h.q == g.q) {
      h.idx = ep_union(h.idx, g.idx);
      return;
    }
  }
  gs.push_back(std::move(g));
}

}  // namespace

bool ep_member_nat(const EPSet& e, const Nat& v) {
  if (v < e.start) return nat_small(v) && e.prefix.count(to_u64(v)) > 0;
  Nat r = (v - e.start) % e.period;
  return e.residues.count(to_u64(r)) > 0;
}

std::optional<std::uint64_t> geo_index_of(const NatGeo& g, const Nat& v) {
  if (v < g.c || v % g.c != 0) return std::nullopt;
  Nat w = v / g.c;
  std::uint64_t n = 0;
  while (w > 1) {
    if (w % g.q != 0) return std::nullopt;
    w /= g.q;
    ++n;
  }
  if (!g.idx.member(n)) return std::nullopt;
  return n;
}

EPSet geo_indices_in_ep(const NatGeo& g, const EPSet& e) {
  // Values grow geometrically; beyond n0 they clear e.start, and the residue
  // orbit of c*q^n mod period is eventually periodic in n.
  std::uint64_t P = e.period;
  std::uint64_t n0 = 0;
  Nat v = g.c;
  while (v < e.start) {
    v *= g.q;
    ++n0;
  }
  EPSet out;
  for (std::uint64_t n = 0; n < n0; ++n) {
    Nat w = g.c * nat_pow(g.q, n);
    if (ep_member_nat(e, w)) out.prefix.insert(n);
  }
  // Orbit from n0: x -> x*q mod P.
  std::map<std::uint64_t, std::uint64_t> seen;  // residue -> step
  std::vector<std::uint64_t> orbit;
  std::uint64_t x = to_u64((g.c * nat_pow(g.q, n0)) % P);
  std::uint64_t qq = to_u64(g.q % P);
  std::uint64_t step = 0;
  std::uint64_t cycle_at = 0, cycle_len = 0;
  while (true) {
    auto it = seen.find(x);
    if (it != seen.end()) {
      cycle_at = it->second;
      cycle_len = step - cycle_at;
      break;
    }
    seen[x] = step;
    orbit.push_back(x);
    x = P == 0 ? 0 : (x * (qq % P)) % P;
    ++step;
    if (step > (1u << 22)) fail(ErrKind::BudgetExceeded, "residue orbit too long");
  }
  // n0 + k has value residue orbit[k] (k < cycle_at preperiodic).
  for (std::uint64_t k = 0; k < cycle_at; ++k) {
    std::uint64_t r = (orbit[k] + P - e.start % P) % P;
    if (e.residues.count(r)) out.prefix.insert(n0 + k);
  }
  out.start = n0 + cycle_at;
  out.period = cycle_len == 0 ? 1 : cycle_len;
  for (std::uint64_t k = 0; k < cycle_len; ++k) {
    std::uint64_t r = (orbit[cycle_at + k] + P - e.start % P) % P;
    if (e.residues.count(r)) out.residues.insert(k);
  }
  return ep_intersect(ep_normalize(out), g.idx);
}

namespace {

// Lattice of solutions (n, m) >= 0 of the exponent equations; empty, a finite
// point list, or a line (n0 + dn*t, m0 + dm*t), t >= 0, dn >= 1.
struct SolSet {
  bool empty = false;
  bool is_line = false;
  std::int64_t n0 = 0, m0 = 0, dn = 0, dm = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> pts;
  bool whole_plane = true;
};

std::int64_t egcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  std::int64_t x1, y1;
  std::int64_t g = egcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

// Intersect with e*n - f*m = g (e, f >= 0).
void restrict_sol(SolSet& s, std::int64_t e, std::int64_t f, std::int64_t g) {
  if (s.empty) return;
  auto on_line = [&](std::int64_t n, std::int64_t m) { return e * n - f * m == g; };
  if (!s.whole_plane && !s.is_line) {
    std::vector<std::pair<std::int64_t, std::int64_t>> keep;
    for (auto& p : s.pts)
      if (on_line(p.first, p.second)) keep.push_back(p);
    s.pts = std::move(keep);
    s.empty = s.pts.empty();
    return;
  }
  if (s.is_line) {
    // substitute (n0 + dn t, m0 + dm t)
    std::int64_t coef = e * s.dn - f * s.dm;
    std::int64_t rhs = g - e * s.n0 + f * s.m0;
    if (coef == 0) {
      if (rhs != 0) {
        s.empty = true;
        s.is_line = false;
      }
      return;
    }
    if (rhs % coef != 0) {
      s.empty = true;
      s.is_line = false;
      return;
    }
    std::int64_t t = rhs / coef;
    s.is_line = false;
    s.whole_plane = false;
    if (t >= 0)
      s.pts = {{s.n0 + s.dn * t, s.m0 + s.dm * t}};
    else
      s.pts.clear();
    s.empty = s.pts.empty();
    return;
  }
  // whole plane
  s.whole_plane = false;
  if (e == 0 && f == 0) {
    if (g != 0) {
      s.empty = true;
      return;
    }
    s.whole_plane = true;  // equation vacuous
    return;
  }
  std::int64_t x, y;
  std::int64_t d = egcd(e, f, x, y);  // e*x + f*y = d
  if (d == 0) d = 1;
  if (g % d != 0) {
    s.empty = true;
    return;
  }
  // e*(x*g/d) - f*(-y*g/d) = g
  std::int64_t n0 = x * (g / d);
  std::int64_t m0 = -y * (g / d);
  std::int64_t dn = f / d;
  std::int64_t dm = e / d;
  if (dn == 0 && dm == 0) {
    s.empty = true;
    return;
  }
  s.is_line = true;
  if (dn < 0) {
    dn = -dn;
    dm = -dm;
  }
  // Make the base point canonical-ish: smallest t with n, m >= 0 comes later.
  s.n0 = n0;
  s.m0 = m0;
  s.dn = dn;
  s.dm = dm;
}

}  // namespace

EPSet geo_indices_in_geo(const NatGeo& g1, const NatGeo& g2) {
  if (g1.q == g2.q) {
    if (g1.c == g2.c) return ep_intersect(g1.idx, g2.idx);
    if (g1.c < g2.c) {
      if (g2.c % g1.c != 0) return EPSet::none();
      Nat r = g2.c / g1.c;
      std::uint64_t t = 0;
      while (r > 1) {
        if (r % g1.q != 0) return EPSet::none();
        r /= g1.q;
        ++t;
      }
      // c1 q^n = c2 q^m  <=>  n = m + t
      return ep_intersect(g1.idx, ep_shift_up(g2.idx, t));
    }
    if (g1.c % g2.c != 0) return EPSet::none();
    Nat r = g1.c / g2.c;
    std::uint64_t t = 0;
    while (r > 1) {
      if (r % g1.q != 0) return EPSet::none();
      r /= g1.q;
      ++t;
    }
    // n + t = m
    return ep_intersect(g1.idx, ep_shift_down(g2.idx, t));
  }
  // Different ratios: compare prime exponent growth.
  std::vector<std::uint64_t> ps;
  for (auto p : prime_factors(g1.q)) ps.push_back(p);
  for (auto p : prime_factors(g2.q)) ps.push_back(p);
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  Nat core1 = g1.c, core2 = g2.c;
  SolSet sol;
  for (auto p : ps) {
    Nat c1core, c2core;
    std::int64_t a = (std::int64_t)val_p(g1.c, p, &c1core);
    std::int64_t b = (std::int64_t)val_p(g2.c, p, &c2core);
    std::int64_t e = (std::int64_t)val_p(g1.q, p);
    std::int64_t f = (std::int64_t)val_p(g2.q, p);
    restrict_sol(sol, e, f, b - a);
    if (sol.empty) return EPSet::none();
  }
  for (auto p : ps) {
    while (core1 % p == 0) core1 /= p;
    while (core2 % p == 0) core2 /= p;
  }
  if (core1 != core2) return EPSet::none();
  if (sol.whole_plane) fail(ErrKind::Internal, "geo pair with no constraining prime");
  if (!sol.is_line) {
    std::set<std::uint64_t> pts;
    for (auto& [n, m] : sol.pts)
      if (n >= 0 && m >= 0 && g1.idx.member((std::uint64_t)n) && g2.idx.member((std::uint64_t)m))
        pts.insert((std::uint64_t)n);
    return EPSet::finite(std::move(pts));
  }
  // Surviving lines have dn, dm >= 0 (prime valuations are nonnegative), and
  // dn >= 1: a dn == 0 line would give one value infinitely many exponents.
  if (sol.dn <= 0 || sol.dm < 0) fail(ErrKind::Internal, "degenerate geo solution line");
  std::int64_t t0 = 0;
  auto bad = [&](std::int64_t t) {
    return sol.n0 + sol.dn * t < 0 || sol.m0 + sol.dm * t < 0;
  };
  if (sol.dm == 0 && sol.m0 < 0) return EPSet::none();
  while (bad(t0)) {
    ++t0;
    if (t0 > (1 << 20)) return EPSet::none();
  }
  std::uint64_t n_start = (std::uint64_t)(sol.n0 + sol.dn * t0);
  std::uint64_t m_start = (std::uint64_t)(sol.m0 + sol.dm * t0);
  // t-sets from both index constraints, then map back to n.
  EPSet t_from_1 = ep_affine_preimage(g1.idx, n_start, (std::uint64_t)sol.dn);
  EPSet t_from_2 = sol.dm == 0
                       ? (g2.idx.member(m_start) ? EPSet::all() : EPSet::none())
                       : ep_affine_preimage(g2.idx, m_start, (std::uint64_t)sol.dm);
  EPSet ts = ep_intersect(t_from_1, t_from_2);
  return ep_affine_image(ts, n_start, (std::uint64_t)sol.dn);
}

bool sp_member(const Sparse& a, const Nat& v) {
  if (a.pts.count(v)) return true;
  for (const auto& g : a.geos)
    if (geo_index_of(g, v)) return true;
  return false;
}

Sparse sp_union(const Sparse& a, const Sparse& b) {
  Sparse out = a;
  for (const auto& g : b.geos) push_geo(out.geos, g);
  out.pts.insert(b.pts.begin(), b.pts.end());
  return out;
}

Sparse sp_intersect(const Sparse& a, const Sparse& b) {
  Sparse out;
  for (const auto& g : a.geos) {
    EPSet keep = EPSet::none();
    for (const auto& h : b.geos) keep = ep_union(keep, geo_indices_in_geo(g, h));
    for (const auto& v : b.pts) {
      auto i = geo_index_of(g, v);
      if (i) keep = ep_union(keep, EPSet::finite({*i}));
    }
    keep = ep_intersect(keep, g.idx);
    push_geo(out.geos, NatGeo{g.c, g.q, keep});
  }
  for (const auto& v : a.pts)
    if (sp_member(b, v)) out.pts.insert(v);
  return out;
}

Sparse sp_diff(const Sparse& a, const Sparse& b) {
  Sparse out;
  for (const auto& g : a.geos) {
    EPSet drop = EPSet::none();
    for (const auto& h : b.geos) drop = ep_union(drop, geo_indices_in_geo(g, h));
    for (const auto& v : b.pts) {
      auto i = geo_index_of(g, v);
      if (i) drop = ep_union(drop, EPSet::finite({*i}));
    }
    push_geo(out.geos, NatGeo{g.c, g.q, ep_diff(g.idx, drop)});
  }
  for (const auto& v : a.pts)
    if (!sp_member(b, v)) out.pts.insert(v);
  return out;
}

Sparse sp_intersect_ep(const Sparse& a, const EPSet& e) {
  Sparse out;
  for (const auto& g : a.geos)
    push_geo(out.geos, NatGeo{g.c, g.q, geo_indices_in_ep(g, e)});
  for (const auto& v : a.pts)
    if (ep_member_nat(e, v)) out.pts.insert(v);
  return out;
}

Sparse sp_diff_ep(const Sparse& a, const EPSet& e) {
  Sparse out;
  for (const auto& g : a.geos)
    push_geo(out.geos, NatGeo{g.c, g.q, ep_diff(g.idx, geo_indices_in_ep(g, e))});
  for (const auto& v : a.pts)
    if (!ep_member_nat(e, v)) out.pts.insert(v);
  return out;
}

NF to_nf(const SetExpr& s) {
  if (!s.carrier().is_nat()) fail(ErrKind::CarrierMismatch, "nat normal form needs the nat carrier");
  NF nf;
  for (const auto& a : s.atoms()) {
    if (std::holds_alternative<NatAP>(a)) {
      const auto& ap = std::get<NatAP>(a);
      if (!nat_small(ap.a) || ap.d > kStepCap)
        fail(ErrKind::BudgetExceeded, "ap parameters exceed the periodic-part budget");
      nf.ep = ep_union(nf.ep, EPSet::arithmetic(to_u64(ap.a), to_u64(ap.d)));
    } else if (std::holds_alternative<Pts>(a)) {
      std::set<std::uint64_t> small;
      for (const auto& p : std::get<Pts>(a).pts) {
        Nat v = p.scalar().finite_value();
        if (nat_small(v)) small.insert(to_u64(v));
        else nf.pos.pts.insert(v);
      }
      nf.ep = ep_union(nf.ep, EPSet::finite(std::move(small)));
    } else if (std::holds_alternative<NatGeo>(a)) {
      push_geo(nf.pos.geos, std::get<NatGeo>(a));
    } else {
      fail(ErrKind::CarrierMismatch, "non-nat atom on the nat carrier");
    }
  }
  for (const auto& h : s.holes()) {
    if (std::holds_alternative<Pts>(h)) {
      for (const auto& p : std::get<Pts>(h).pts) nf.neg.pts.insert(p.scalar().finite_value());
    } else {
      push_geo(nf.neg.geos, std::get<NatGeo>(h));
    }
  }
  // pos is authoritative: strip it out of neg.
  nf.neg = sp_diff(nf.neg, nf.pos);
  return nf;
}

SetExpr from_nf(const NF& nf0) {
  NF nf = nf0;
  // Prune holes that cannot touch the periodic part.
  nf.neg = sp_intersect_ep(nf.neg, nf.ep);
  std::vector<Atom> atoms;
  std::vector<Point> pts;
  for (auto p : nf.ep.prefix) pts.push_back(Point(Ordinal(p)));
  for (auto r : nf.ep.residues)
    atoms.push_back(NatAP{Nat(nf.ep.start + r), Nat(nf.ep.period)});
  for (const auto& v : nf.pos.pts) pts.push_back(Point(Ordinal(v)));
  for (const auto& g : nf.pos.geos)
    if (!g.idx.is_empty()) atoms.push_back(g);
  if (!pts.empty()) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    atoms.push_back(Pts{std::move(pts)});
  }
  SetExpr base(Carrier::nat(), std::move(atoms));
  std::vector<Atom> holes;
  std::vector<Point> hole_pts;
  for (const auto& v : nf.neg.pts) hole_pts.push_back(Point(Ordinal(v)));
  if (!hole_pts.empty()) {
    std::sort(hole_pts.begin(), hole_pts.end());
    holes.push_back(Pts{std::move(hole_pts)});
  }
  for (const auto& g : nf.neg.geos)
    if (!g.idx.is_empty()) holes.push_back(g);
  if (holes.empty()) return base;
  return nat_with_holes(std::move(base), std::move(holes));
}

NF nf_union(const NF& a, const NF& b) {
  NF out;
  out.ep = ep_union(a.ep, b.ep);
  out.neg = sp_union(a.neg, b.neg);
  // Rescue members of one periodic part that the other side's holes cover.
  Sparse x1 = sp_diff(sp_intersect_ep(b.neg, a.ep), a.neg);
  Sparse x2 = sp_diff(sp_intersect_ep(a.neg, b.ep), b.neg);
  out.pos = sp_union(sp_union(a.pos, b.pos), sp_union(x1, x2));
  out.neg = sp_diff(out.neg, out.pos);
  return out;
}

NF nf_intersect(const NF& a, const NF& b) {
  NF out;
  out.ep = ep_intersect(a.ep, b.ep);
  out.neg = sp_union(a.neg, b.neg);
  Sparse p1 = sp_diff(sp_intersect_ep(a.pos, b.ep), b.neg);
  Sparse p2 = sp_diff(sp_intersect_ep(b.pos, a.ep), a.neg);
  Sparse p3 = sp_intersect(a.pos, b.pos);
  out.pos = sp_union(sp_union(p1, p2), p3);
  out.neg = sp_diff(out.neg, out.pos);
  return out;
}

NF nf_diff(const NF& a, const NF& b) {
  NF out;
  out.ep = ep_diff(a.ep, b.ep);
  out.neg = sp_union(a.neg, b.pos);
  Sparse a_pos_rest = sp_diff(a.pos, b.pos);
  Sparse p1 = sp_diff_ep(a_pos_rest, b.ep);
  Sparse p2 = sp_intersect(a_pos_rest, b.neg);
  // Members of a's periodic part that b's holes protect from subtraction.
  Sparse p3 = sp_diff(sp_diff(sp_intersect_ep(b.neg, a.ep), a.neg), b.pos);
  out.pos = sp_union(sp_union(p1, p2), p3);
  out.neg = sp_diff(out.neg, out.pos);
  return out;
}

bool nf_member(const NF& a, const Nat& v) {
  if (sp_member(a.pos, v)) return true;
  return ep_member_nat(a.ep, v) && !sp_member(a.neg, v);
}

bool nf_is_empty(const NF& a) {
  if (!a.pos.pts.empty()) return false;
  for (const auto& g : a.pos.geos)
    if (!g.idx.is_empty()) return false;
  if (a.ep.residues.empty() && a.ep.prefix.empty()) return true;
  if (!a.ep.residues.empty()) return false;  // holes cannot kill a progression
  for (auto p : a.ep.prefix)
    if (!sp_member(a.neg, Nat(p))) return false;
  return true;
}

bool nf_is_infinite(const NF& a) {
  if (!a.ep.residues.empty()) return true;
  for (const auto& g : a.pos.geos)
    if (g.idx.is_infinite()) return true;
  return false;
}

Nat nf_count(const NF& a) {
  if (nf_is_infinite(a)) fail(ErrKind::NotFinite, "count of an infinite nat set");
  std::set<Nat> vals;
  for (auto p : a.ep.prefix)
    if (!sp_member(a.neg, Nat(p))) vals.insert(Nat(p));
  for (const auto& v : a.pos.pts) vals.insert(v);
  for (const auto& g : a.pos.geos)
    for (auto i : g.idx.take(*g.idx.size_if_finite())) vals.insert(g.c * nat_pow(g.q, i));
  return Nat(vals.size());
}

std::vector<Nat> nf_take(const NF& a, std::size_t count) {
  std::set<Nat> merged;
  // Geo values grow with the index, so the first `count` indices suffice.
  for (const auto& g : a.pos.geos)
    for (auto i : g.idx.take(count)) merged.insert(g.c * nat_pow(g.q, i));
  for (const auto& v : a.pos.pts) merged.insert(v);
  if (!a.ep.prefix.empty() || !a.ep.residues.empty()) {
    // Holes eat at most logarithmically many periodic members, so a bounded
    // overshoot scan is enough to recover `count` survivors.
    std::uint64_t hole_slack = 70 * (a.neg.geos.size() + 1) + a.neg.pts.size();
    std::uint64_t want = count + hole_slack;
    std::uint64_t limit = want * (a.ep.period + 1) + a.ep.start + 1;
    std::size_t got = 0;
    for (std::uint64_t v = 0; v <= limit && got < count; ++v) {
      if (ep_member_nat(a.ep, Nat(v)) && !sp_member(a.neg, Nat(v))) {
        merged.insert(Nat(v));
        ++got;
      }
    }
    if (got < count && !a.ep.residues.empty())
      fail(ErrKind::Internal, "periodic scan fell short of the requested count");
  }
  std::vector<Nat> out;
  for (const auto& x : merged) {
    if (out.size() >= count) break;
    out.push_back(x);
  }
  return out;
}

bool nf_has_ap_part(const NF& a) { return !a.ep.residues.empty(); }

SetExpr nat_choose_progression(const SetExpr& s) {
  NF nf = to_nf(s);
  if (!nf_is_infinite(nf)) fail(ErrKind::NotInfinite, "choose_progression needs an infinite set");
  if (!nf.ep.residues.empty()) {
    std::uint64_t r = *nf.ep.residues.begin();
    Nat a = nf.ep.start + r;
    Nat d = nf.ep.period;
    if (nf.neg.empty()) return SetExpr(Carrier::nat(), {NatAP{a, d}});
    // Dodge the holes: pick a prime p coprime to everything in sight and
    // walk the subprogression of multiples of p; geo holes never hit it.
    Nat p = 2;
    auto coprime_ok = [&](const Nat& pp) {
      if (d % pp == 0) return false;
      for (const auto& g : nf.neg.geos)
        if (g.c % pp == 0 || g.q % pp == 0) return false;
      return true;
    };
    while (!coprime_ok(p)) {
      p += 1;
      while (true) {
        bool prime = p >= 2;
        for (Nat f = 2; f * f <= p; ++f)
          if (p % f == 0) { prime = false; break; }
        if (prime) break;
        p += 1;
      }
    }
    // a' = smallest element of the AP divisible by p, then step d*p.
    Nat a2 = a;
    while (a2 % p != 0) a2 += d;
    Nat step = d * p;
    // Hole points are finite; start beyond them.
    Nat maxpt = 0;
    for (const auto& v : nf.neg.pts) maxpt = std::max(maxpt, v);
    while (a2 <= maxpt) a2 += step;
    return SetExpr(Carrier::nat(), {NatAP{a2, step}});
  }
  for (const auto& g : nf.pos.geos)
    if (g.idx.is_infinite()) return SetExpr(Carrier::nat(), {g});
  fail(ErrKind::Internal, "infinite nat set with no infinite part");
}

}  // namespace ordlab::natset

namespace ordlab {

SetExpr boolean_nat(const SetExpr& a, const SetExpr& b, BoolOp op) {
  if (!a.carrier().is_nat() || !b.carrier().is_nat())
    fail(ErrKind::CarrierMismatch, "boolean_nat needs nat carriers");
  auto na = natset::to_nf(a);
  auto nb = natset::to_nf(b);
  natset::NF r;
  switch (op) {
    case BoolOp::Union: r = natset::nf_union(na, nb); break;
    case BoolOp::Intersect: r = natset::nf_intersect(na, nb); break;
    case BoolOp::Diff: r = natset::nf_diff(na, nb); break;
  }
  return natset::from_nf(r);
}

}  // namespace ordlab
