#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ordlab/set_expr.hpp"

namespace ordlab {

/// Rules a map piece can apply. BiAffine evaluates delta + gr*r + gc*c in
/// that order (ordinal multiplication is not commutative); a zero gr or gc
/// drops that term. Affine's `pre` subtracts a finite offset first (nat
/// domains), giving n -> delta + gamma*(n - pre).
struct ConstR {
  Point value;
};
struct AffineR {
  Ordinal delta, gamma;
  Nat pre;
};
struct BiAffineR {
  Ordinal delta, gr, gc;
};
/// n -> delta + gamma*|index_set n [0, n)| on nat domains.
struct RankInR {
  std::shared_ptr<const SetExpr> index_set;
  Ordinal delta, gamma;
};
/// x -> quotient of left division by gamma, plus shift in {-1, 0}.
struct QuotR {
  Ordinal gamma;
  int shift;
};
/// x -> remainder of left division by gamma.
struct RemR {
  Ordinal gamma;
};
struct RuleBox;
/// x -> (row(x), col(x)) into a product codomain.
struct PairR {
  std::shared_ptr<const RuleBox> row, col;
};
/// Built-in block isomorphisms (see block_iso.hpp); applied possibly inverted.
struct MacroR {
  int macro_id;
  bool inverted;
  Ordinal alpha;
};

using Rule = std::variant<ConstR, AffineR, BiAffineR, RankInR, QuotR, RemR, PairR, MacroR>;

struct RuleBox {
  Rule rule;
};

struct MapPiece {
  SetExpr guard;
  Rule rule;
};

struct MapProps {
  bool injective_on_pieces = false;
  bool finite_to_one = false;
  bool covers = false;
};

/// A finitely-described function: finitely many disjoint guards covering the
/// domain, each with one rule.
class MapExpr {
public:
  MapExpr(Carrier domain, Carrier codomain, std::vector<MapPiece> pieces);

  const Carrier& domain() const { return domain_; }
  const Carrier& codomain() const { return codomain_; }
  const std::vector<MapPiece>& pieces() const { return pieces_; }

  std::string str() const;

private:
  Carrier domain_, codomain_;
  std::vector<MapPiece> pieces_;
};

Point apply(const MapExpr& f, const Point& x);
inline Point apply(const MapExpr& f, const Ordinal& x) { return apply(f, Point(x)); }

SetExpr image(const MapExpr& f, const SetExpr& s);
SetExpr preimage(const MapExpr& f, const SetExpr& t);

MapProps map_props(const MapExpr& f);

MapExpr compose(const MapExpr& g, const MapExpr& f);

/// Exact intersection within the closure budget: points against anything,
/// nat-carrier boolean algebra, rect recursion, progressions against ordinal
/// atoms, and interval-shaped guards.
SetExpr intersect_sets(const SetExpr& a, const SetExpr& b);

/// |s n [0, n)| for a nat set.
Nat count_below(const SetExpr& s, const Nat& n);

std::string rule_str(const Rule& r);

}  // namespace ordlab
