#include "ordlab/carrier.hpp"

#include <sstream>

#include "ordlab/error.hpp"

namespace ordlab {

Carrier Carrier::ordinal(Ordinal top) {
  Carrier c;
  c.k_ = K::Ord;
  c.top_ = std::move(top);
  return c;
}

Carrier Carrier::nat() {
  Carrier c;
  c.k_ = K::Nat;
  return c;
}

Carrier Carrier::prod(Carrier row, Carrier col) {
  Carrier c;
  c.k_ = K::Prod;
  c.row_ = std::make_shared<const Carrier>(std::move(row));
  c.col_ = std::make_shared<const Carrier>(std::move(col));
  return c;
}

const Ordinal& Carrier::top() const {
  if (!is_ord()) fail(ErrKind::CarrierMismatch, "top() on a non-ordinal carrier");
  return top_;
}

const Carrier& Carrier::row() const {
  if (!is_prod()) fail(ErrKind::CarrierMismatch, "row() on a non-product carrier");
  return *row_;
}

const Carrier& Carrier::col() const {
  if (!is_prod()) fail(ErrKind::CarrierMismatch, "col() on a non-product carrier");
  return *col_;
}

std::size_t Carrier::arity() const {
  if (!is_prod()) return 1;
  return row_->arity() + col_->arity();
}

std::string Carrier::str() const {
  switch (k_) {
    case K::Ord: return top_.str() + "+1";
    case K::Nat: return "N";
    case K::Prod: {
      std::ostringstream os;
      os << "(" << row_->str() << ") x (" << col_->str() << ")";
      return os.str();
    }
  }
  return "?";
}

bool operator==(const Carrier& a, const Carrier& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Carrier::K::Ord: return a.top() == b.top();
    case Carrier::K::Nat: return true;
    case Carrier::K::Prod: return a.row() == b.row() && a.col() == b.col();
  }
  return false;
}

Point Point::pair(const Point& a, const Point& b) {
  Point p;
  p.xs = a.xs;
  p.xs.insert(p.xs.end(), b.xs.begin(), b.xs.end());
  return p;
}

const Ordinal& Point::scalar() const {
  if (xs.size() != 1) fail(ErrKind::CarrierMismatch, "scalar() on a product point");
  return xs[0];
}

std::string Point::str() const {
  if (xs.size() == 1) return xs[0].str();
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) os << ", ";
    os << xs[i].str();
  }
  os << ")";
  return os.str();
}

bool operator==(const Point& a, const Point& b) {
  if (a.xs.size() != b.xs.size()) return false;
  for (std::size_t i = 0; i < a.xs.size(); ++i)
    if (a.xs[i] != b.xs[i]) return false;
  return true;
}

bool operator<(const Point& a, const Point& b) {
  if (a.xs.size() != b.xs.size()) return a.xs.size() < b.xs.size();
  for (std::size_t i = 0; i < a.xs.size(); ++i) {
    int c = compare(a.xs[i], b.xs[i]);
    if (c) return c < 0;
  }
  return false;
}

bool point_in_carrier(const Point& p, const Carrier& c) {
  if (p.xs.size() != c.arity()) return false;
  if (c.is_ord()) return p.xs[0] <= c.top();
  if (c.is_nat()) return p.xs[0].is_finite();
  auto [r, col] = split_point(p, c);
  return point_in_carrier(r, c.row()) && point_in_carrier(col, c.col());
}

std::pair<Point, Point> split_point(const Point& p, const Carrier& c) {
  if (!c.is_prod()) fail(ErrKind::CarrierMismatch, "split_point on scalar carrier");
  std::size_t ra = c.row().arity();
  Point r, cc;
  r.xs.assign(p.xs.begin(), p.xs.begin() + ra);
  cc.xs.assign(p.xs.begin() + ra, p.xs.end());
  return {r, cc};
}

}  // namespace ordlab
