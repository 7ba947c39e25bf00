#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ordlab/nat.hpp"

namespace ordlab {

enum class PointKind { Zero, Successor, Limit };

class Ordinal;
struct OrdTerm;

/// An ordinal below epsilon_0 in Cantor normal form:
/// w^{e_1}*c_1 + ... + w^{e_r}*c_r with e_1 > e_2 > ... > e_r and c_i >= 1.
/// The empty term list is 0. Values are immutable once built.
class Ordinal {
public:
  Ordinal() = default;
  Ordinal(std::uint64_t n);
  explicit Ordinal(const Nat& n);

  // Validates strict exponent descent.
  static Ordinal from_terms(std::vector<OrdTerm> terms);

  const std::vector<OrdTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  Nat finite_value() const;  // requires is_finite
  PointKind kind() const;
  bool is_limit() const { return kind() == PointKind::Limit; }
  bool is_successor() const { return kind() == PointKind::Successor; }

  const OrdTerm& lead() const { return terms_.front(); }
  Ordinal tail() const;  // drop leading term

  std::string str() const;

private:
  std::vector<OrdTerm> terms_;
  friend int compare(const Ordinal&, const Ordinal&);
  friend Ordinal add(const Ordinal&, const Ordinal&);
  friend Ordinal mul(const Ordinal&, const Ordinal&);
  friend Ordinal left_sub(const Ordinal&, const Ordinal&);
};

struct OrdTerm {
  Ordinal exp;
  Nat coeff;
};

int compare(const Ordinal& a, const Ordinal& b);  // -1, 0, +1

inline bool operator==(const Ordinal& a, const Ordinal& b) { return compare(a, b) == 0; }
inline bool operator!=(const Ordinal& a, const Ordinal& b) { return compare(a, b) != 0; }
inline bool operator<(const Ordinal& a, const Ordinal& b) { return compare(a, b) < 0; }
inline bool operator<=(const Ordinal& a, const Ordinal& b) { return compare(a, b) <= 0; }
inline bool operator>(const Ordinal& a, const Ordinal& b) { return compare(a, b) > 0; }
inline bool operator>=(const Ordinal& a, const Ordinal& b) { return compare(a, b) >= 0; }

Ordinal add(const Ordinal& a, const Ordinal& b);
Ordinal mul(const Ordinal& a, const Ordinal& b);

/// The unique c with a + c = b; requires a <= b.
Ordinal left_sub(const Ordinal& a, const Ordinal& b);

/// w^a as a single-term normal form. omega_pow(0) = 1.
Ordinal omega_pow(const Ordinal& a);

Ordinal omega();

inline Ordinal operator+(const Ordinal& a, const Ordinal& b) { return add(a, b); }
inline Ordinal operator*(const Ordinal& a, const Ordinal& b) { return mul(a, b); }

inline PointKind point_kind(const Ordinal& a) { return a.kind(); }

/// Predecessor of a successor ordinal.
Ordinal pred(const Ordinal& a);

/// True iff a = w^b (single term, coefficient 1). Requires a > 0.
bool is_indecomposable(const Ordinal& a);

/// Wainer-style assignment: (g + w^{b+1})[n] = g + w^b*(n+1),
/// (g + w^l)[n] = g + w^{l[n]} for limit l; coefficients c >= 2 peel one copy.
/// Strictly increasing in n with supremum a. Requires a limit.
Ordinal fundamental_seq(const Ordinal& a, std::uint64_t n);

/// Left division: r = d*quot + rem with rem < d (d >= 1).
struct DivLeft {
  Ordinal quot;
  Ordinal rem;
};
DivLeft div_left(const Ordinal& r, const Ordinal& d);

/// Least q with d*q >= r.
Ordinal ceil_div_left(const Ordinal& r, const Ordinal& d);

/// Solves delta + gamma*x = v exactly with x >= 1.
struct AffineSolution {
  bool ok = false;
  Ordinal xi;
};
AffineSolution solve_affine(const Ordinal& delta, const Ordinal& gamma, const Ordinal& v);

std::string to_string(const Ordinal& a);

struct OrdinalLess {
  bool operator()(const Ordinal& a, const Ordinal& b) const { return a < b; }
};

}  // namespace ordlab
