#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ordlab/set_expr.hpp"

namespace ordlab {

/// A strictly increasing omega-sequence of ordinals with a symbolic supremum.
/// Three shapes cover every generator the engine needs:
///   affine    l_k = delta + gamma*(k+1),      sup = delta + gamma*w
///   powers    l_k = w^{alpha[k]},             sup = w^alpha   (alpha a limit)
///   shifted   l_k = base + w^{alpha[k]},      sup = base + w^alpha
class OmegaSeq {
public:
  static OmegaSeq affine(Ordinal delta, Ordinal gamma);
  static OmegaSeq powers(Ordinal alpha);
  static OmegaSeq shifted(Ordinal base, const OmegaSeq& inner);

  Ordinal at(std::uint64_t k) const;
  Ordinal sup() const;
  bool is_affine() const { return kind_ == K::Aff; }
  const Ordinal& aff_delta() const { return delta_; }
  const Ordinal& aff_gamma() const { return gamma_; }
  std::string str() const;

private:
  enum class K { Aff, Pow };
  K kind_ = K::Aff;
  Ordinal delta_, gamma_;  // affine
  Ordinal base_, alpha_;   // powers (base for the shifted form)
};

struct SlotBounds {
  bool lo_closed = true;
  bool hi_closed = false;
};

/// Exact trace of a set along the slots of a sequence. Slots default to
/// [l_k, l_{k+1}) half-open; both endpoint styles are supported. Contents for
/// k < onset are explicit; from onset the contents repeat with the stated
/// period (verified structurally over a window; translation_stable means the
/// rebased contents are literally equal, not just equal in verdict).
struct SlotTrace {
  SlotBounds bounds;
  std::vector<SetExpr> prefix;
  std::uint64_t onset = 0;
  std::uint64_t period = 1;
  std::vector<SetExpr> cycle;
  bool translation_stable = false;

  const SetExpr& slot(std::uint64_t k) const {
    return k < onset ? prefix[k] : cycle[(k - onset) % period];
  }
  Card slot_card(std::uint64_t k) const;
  bool tail_all_finite() const;
  bool tail_all_empty() const;
  /// Index set {k : slot k infinite} as a nat set expression.
  SetExpr infinite_slots() const;
};

SlotTrace slot_trace(const SetExpr& s, const OmegaSeq& seq, SlotBounds bounds = {});

/// Membership pattern of the sequence's points in a set: explicit prefix
/// verdicts, then periodic.
struct SeqPattern {
  std::vector<bool> prefix;
  std::uint64_t onset = 0;
  std::uint64_t period = 1;
  std::vector<bool> cycle;
  bool at(std::uint64_t k) const {
    return k < onset ? prefix[k] : cycle[(k - onset) % period];
  }
};
SeqPattern seq_membership_pattern(const OmegaSeq& seq, const SetExpr& s);

/// Structural equality after canonical ordering (sufficient, not complete:
/// used to certify stability, never to deny it).
bool structurally_equal(const SetExpr& a, const SetExpr& b);

/// Rebase an ordinal-carrier set lying within [base, top] to offsets
/// left_sub(base, x), placed in carrier [0, new_top].
SetExpr rebase_down(const SetExpr& s, const Ordinal& base, const Carrier& target);

/// Inverse: shift offsets up by base into the target carrier.
SetExpr rebase_up(const SetExpr& s, const Ordinal& base, const Carrier& target);

}  // namespace ordlab
