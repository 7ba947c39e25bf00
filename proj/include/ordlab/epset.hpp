#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ordlab {

/// Eventually periodic subset of the naturals, used as a Geo index set:
/// members below `start` listed in `prefix`, members >= start are the n with
/// (n - start) mod period in `residues`. Closed under union, intersection,
/// difference and complement.
struct EPSet {
  std::set<std::uint64_t> prefix;
  std::uint64_t start = 0;
  std::uint64_t period = 1;
  std::set<std::uint64_t> residues;

  static EPSet all();
  static EPSet none();
  static EPSet finite(std::set<std::uint64_t> pts);
  static EPSet arithmetic(std::uint64_t a, std::uint64_t d);  // {a + d*k}

  bool member(std::uint64_t n) const;
  bool is_empty() const;
  bool is_infinite() const;
  std::optional<std::uint64_t> min() const;
  /// Members enumerated ascending; count capped.
  std::vector<std::uint64_t> take(std::size_t count) const;
  /// Restrict to n >= bound.
  EPSet tail_from(std::uint64_t bound) const;
  /// Drop one member.
  EPSet without(std::uint64_t n) const;
  /// Exact cardinality when finite.
  std::optional<std::uint64_t> size_if_finite() const;

  std::string str() const;
};

EPSet ep_union(const EPSet& a, const EPSet& b);
EPSet ep_intersect(const EPSet& a, const EPSet& b);
EPSet ep_diff(const EPSet& a, const EPSet& b);
EPSet ep_complement(const EPSet& a);
bool ep_equal(const EPSet& a, const EPSet& b);

/// {n : n + t in e}
EPSet ep_shift_down(const EPSet& e, std::uint64_t t);
/// {n + t : n in e}
EPSet ep_shift_up(const EPSet& e, std::uint64_t t);
/// {t : a + d*t in e}, d >= 1
EPSet ep_affine_preimage(const EPSet& e, std::uint64_t a, std::uint64_t d);
/// {a + d*t : t in e}, d >= 1
EPSet ep_affine_image(const EPSet& e, std::uint64_t a, std::uint64_t d);

/// Canonical form: minimal period and tight start (best effort: period
/// reduced to the smallest divisor that works, prefix absorbed into the
/// periodic part where possible).
EPSet ep_normalize(const EPSet& a);

}  // namespace ordlab
