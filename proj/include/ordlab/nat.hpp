#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

#include "ordlab/error.hpp"

namespace ordlab {

// Arbitrary-precision natural number. Battery generators can exceed 64 bits
// (geometric atoms, coefficient products), so everything value-level is exact.
using Nat = boost::multiprecision::cpp_int;

inline Nat nat_sub(const Nat& a, const Nat& b) {
  if (a < b) fail(ErrKind::Undefined, "natural subtraction would go negative");
  return a - b;
}

inline Nat nat_gcd(Nat a, Nat b) {
  while (b != 0) {
    Nat t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline Nat nat_lcm(const Nat& a, const Nat& b) {
  if (a == 0 || b == 0) return 0;
  return a / nat_gcd(a, b) * b;
}

inline Nat nat_pow(const Nat& base, std::uint64_t e) {
  Nat r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r *= base;
  return r;
}

inline std::uint64_t to_u64(const Nat& n) {
  return n.convert_to<std::uint64_t>();
}

inline std::string nat_str(const Nat& n) { return n.str(); }

}  // namespace ordlab
