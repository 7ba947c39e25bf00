#pragma once

// Nat-carrier set algebra. Arithmetic progressions and small points live in
// one eventually periodic value set; geometric atoms and oversized points are
// kept sparse. Difference can punch sparse holes into the periodic part, so a
// normal form carries explicit negatives: value = POS u (EP \ NEG).

#include <set>
#include <vector>

#include "ordlab/epset.hpp"
#include "ordlab/set_expr.hpp"

namespace ordlab::natset {

struct Sparse {
  std::vector<NatGeo> geos;
  std::set<Nat> pts;

  bool empty() const { return geos.empty() && pts.empty(); }
};

struct NF {
  EPSet ep;     // small-value eventually periodic part
  Sparse pos;   // authoritative positives
  Sparse neg;   // holes in ep only
};

NF to_nf(const SetExpr& s);
SetExpr from_nf(const NF& nf);

NF nf_union(const NF& a, const NF& b);
NF nf_intersect(const NF& a, const NF& b);
NF nf_diff(const NF& a, const NF& b);

bool nf_member(const NF& a, const Nat& v);
bool nf_is_empty(const NF& a);
bool nf_is_infinite(const NF& a);
/// Exact count when finite.
Nat nf_count(const NF& a);
/// Ascending members.
std::vector<Nat> nf_take(const NF& a, std::size_t count);

/// True iff the set contains a full arithmetic progression (equivalently:
/// positive lower density / divergent harmonic sum on this algebra).
bool nf_has_ap_part(const NF& a);

/// Single-atom infinite subset: an AP dodging all holes, or a geo atom.
SetExpr nat_choose_progression(const SetExpr& s);

bool ep_member_nat(const EPSet& e, const Nat& v);

/// Indices n of g whose value c*q^n lies in the periodic value set e.
EPSet geo_indices_in_ep(const NatGeo& g, const EPSet& e);

/// Indices n of g1 whose value is also a value of g2 (any index of g2).
EPSet geo_indices_in_geo(const NatGeo& g1, const NatGeo& g2);

/// Index of v in g, if v = c*q^n for some n in idx.
std::optional<std::uint64_t> geo_index_of(const NatGeo& g, const Nat& v);

Sparse sp_union(const Sparse& a, const Sparse& b);
Sparse sp_intersect(const Sparse& a, const Sparse& b);
Sparse sp_diff(const Sparse& a, const Sparse& b);
Sparse sp_intersect_ep(const Sparse& a, const EPSet& e);
Sparse sp_diff_ep(const Sparse& a, const EPSet& e);
bool sp_member(const Sparse& a, const Nat& v);

}  // namespace ordlab::natset
