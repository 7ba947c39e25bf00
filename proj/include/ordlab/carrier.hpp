#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ordlab/ordinal.hpp"

namespace ordlab {

/// Carrier of a set or map: an ordinal segment [0, top] with the order
/// topology, the naturals, or a product (nesting depth <= 3 in practice).
class Carrier {
public:
  enum class K { Ord, Nat, Prod };

  static Carrier ordinal(Ordinal top);
  static Carrier nat();
  static Carrier prod(Carrier row, Carrier col);

  K kind() const { return k_; }
  bool is_ord() const { return k_ == K::Ord; }
  bool is_nat() const { return k_ == K::Nat; }
  bool is_prod() const { return k_ == K::Prod; }
  bool is_scalar() const { return !is_prod(); }

  const Ordinal& top() const;      // Ord only
  const Carrier& row() const;      // Prod only
  const Carrier& col() const;      // Prod only

  /// Number of scalar coordinates of a point in this carrier.
  std::size_t arity() const;

  std::string str() const;

private:
  K k_ = K::Nat;
  Ordinal top_;
  std::shared_ptr<const Carrier> row_, col_;
};

bool operator==(const Carrier& a, const Carrier& b);
inline bool operator!=(const Carrier& a, const Carrier& b) { return !(a == b); }

/// A point is the flattened coordinate tuple; scalar carriers use one
/// coordinate. Nat-carrier coordinates are finite ordinals.
struct Point {
  std::vector<Ordinal> xs;

  Point() = default;
  explicit Point(Ordinal o) { xs.push_back(std::move(o)); }
  static Point pair(const Point& a, const Point& b);

  const Ordinal& scalar() const;
  std::string str() const;
};

bool operator==(const Point& a, const Point& b);
bool operator<(const Point& a, const Point& b);  // coordinatewise lex, for containers

/// Checks the point shape-fits and lies inside the carrier (<= top, finite
/// on nat coordinates).
bool point_in_carrier(const Point& p, const Carrier& c);

/// Splits a product point into row/col components.
std::pair<Point, Point> split_point(const Point& p, const Carrier& c);

}  // namespace ordlab
