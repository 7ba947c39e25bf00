#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ordlab/carrier.hpp"
#include "ordlab/epset.hpp"
#include "ordlab/nat.hpp"

namespace ordlab {

class SetExpr;

/// Finite set of points (any carrier).
struct Pts {
  std::vector<Point> pts;  // sorted, unique
};

/// {delta + gamma*xi : 1 <= xi < w^beta} on an ordinal carrier; gamma,beta >= 1.
struct AffImg {
  Ordinal delta, gamma, beta;
};

/// {a + d*n : n in omega} on the nat carrier; d >= 1.
struct NatAP {
  Nat a, d;
};

/// {c * q^n : n in idx} on the nat carrier; c >= 1, q >= 2.
struct NatGeo {
  Nat c, q;
  EPSet idx;
};

/// R x C on a product carrier.
struct Rect {
  std::shared_ptr<const SetExpr> row, col;
};

using Atom = std::variant<Pts, AffImg, NatAP, NatGeo, Rect>;

enum class Card { Empty, Finite, Infinite };

struct Extent {
  Card card = Card::Empty;
  Nat count;                    // valid when Finite
  std::optional<Point> min;     // scalar carriers, nonempty
  std::optional<Ordinal> sup;   // scalar carriers, nonempty (may be unattained)
};

/// A finitely-described subset of a carrier: a finite union of atoms, minus
/// (on the nat carrier only) a sparse set of geometric atoms and points.
/// The subtracted part exists so that the nat-carrier Boolean algebra is
/// closed under difference; every other carrier keeps holes empty.
class SetExpr {
public:
  SetExpr() = default;
  explicit SetExpr(Carrier c) : carrier_(std::move(c)) {}
  SetExpr(Carrier c, std::vector<Atom> atoms);

  static SetExpr empty(Carrier c) { return SetExpr(std::move(c)); }
  static SetExpr points(Carrier c, std::vector<Point> pts);
  /// The whole carrier as a set expression.
  static SetExpr full(const Carrier& c);

  const Carrier& carrier() const { return carrier_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Atom>& holes() const { return holes_; }
  bool has_holes() const { return !holes_.empty(); }

  SetExpr with_atom(Atom a) const;

  std::string str() const;

private:
  Carrier carrier_;
  std::vector<Atom> atoms_;
  std::vector<Atom> holes_;  // nat carrier only; Pts / NatGeo
  friend SetExpr nat_with_holes(SetExpr base, std::vector<Atom> holes);
};

SetExpr nat_with_holes(SetExpr base, std::vector<Atom> holes);

bool member(const SetExpr& s, const Point& x);
inline bool member(const SetExpr& s, const Ordinal& x) { return member(s, Point(x)); }

Extent extent(const SetExpr& s);
inline bool is_empty_set(const SetExpr& s) { return extent(s).card == Card::Empty; }
inline bool is_finite_set(const SetExpr& s) { return extent(s).card != Card::Infinite; }
inline bool is_infinite_set(const SetExpr& s) { return extent(s).card == Card::Infinite; }

/// S restricted to the interval between lo and hi (scalar carriers).
/// hi may be the carrier sup for nat carriers via hi_infinite.
struct IntervalBounds {
  Ordinal lo;
  bool lo_closed = true;
  Ordinal hi;
  bool hi_closed = true;
  bool hi_infinite = false;  // nat carrier: no upper bound
};
SetExpr intersect_interval(const SetExpr& s, const IntervalBounds& b);
SetExpr intersect_interval(const SetExpr& s, const Ordinal& lo, const Ordinal& hi,
                           bool lo_closed = true, bool hi_closed = true);

SetExpr set_union(const SetExpr& a, const SetExpr& b);

/// S minus a finite set; AffImg atoms split by puncturing.
SetExpr diff_finite(const SetExpr& s, const SetExpr& finite_part);

enum class BoolOp { Intersect, Diff, Union };
/// Full Boolean algebra on the nat carrier.
SetExpr boolean_nat(const SetExpr& a, const SetExpr& b, BoolOp op);

/// Exact set of accumulation points within an ordinal carrier.
SetExpr derived_set(const SetExpr& s);

/// Exact order type of the denoted set (ordinal or nat carrier).
Ordinal order_type(const SetExpr& s);

/// One infinite single-atom subset of S with order type omega; on ordinal
/// carriers its derived set is a single point. Requires S infinite.
SetExpr choose_progression(const SetExpr& s);

struct Classification {
  Ordinal rank;
  Nat degree;
};

/// Rank and degree of a compact subspace: least a with the a-th derivative
/// finite, and that derivative's size. Requires derived_set(S) within S.
Classification cb_rank_degree(const SetExpr& s);

/// True iff derived_set(s) is contained in s (the compactness test).
bool is_compact_subspace(const SetExpr& s);

/// Vertical section at a row point; exact on products.
SetExpr section(const SetExpr& s, const Point& row);

/// Rows whose section is nonempty.
SetExpr project_rows(const SetExpr& s);

struct RowClass {
  SetExpr rows;     // subset of the row carrier
  SetExpr section;  // the common section of those rows
};
/// Partition of the row carrier into finitely many classes with identical
/// sections. Exact for nat rows; ordinal rows raise UnsupportedRows.
std::vector<RowClass> row_classes(const SetExpr& s);

/// First `count` elements in increasing order (scalar carriers).
std::vector<Point> enumerate_inorder(const SetExpr& s, std::size_t count);

/// Least element (scalar carriers, nonempty).
Point min_point(const SetExpr& s);

/// Decomposes {delta + gamma*xi : lo <= xi < hi} into Pts/AffImg atoms.
std::vector<Atom> affine_segment_atoms(const Ordinal& delta, const Ordinal& gamma,
                                       const Ordinal& xi_lo, const Ordinal& xi_hi);

/// Supremum of an AffImg atom: delta + gamma*w^beta (not attained).
Ordinal aff_sup(const AffImg& a);

/// True iff x is a member of the single atom.
bool atom_member(const Atom& a, const Point& x, const Carrier& c);

std::string atom_str(const Atom& a);

}  // namespace ordlab
