#pragma once

#include <stdexcept>
#include <string>

namespace ordlab {

// Every failure the engine can signal carries one of these kinds so the CLI
// can map it to an exit code and a machine-readable field.
enum class ErrKind {
  Undefined,        // left subtraction with a > b
  NotLimit,
  NotFinite,
  NotInfinite,
  NotCompact,
  BudgetExceeded,   // representable-algebra closure budget hit
  GuardGap,
  BadSpec,
  BadName,
  IsMember,
  NoWitness,
  NoRefutation,
  FiberNotSmall,
  HypothesisFailed,
  WitnessRejected,
  OracleFailed,
  UnsupportedRows,
  CarrierMismatch,
  Syntax,
  Internal,
};

const char* err_kind_name(ErrKind k);

class Error : public std::runtime_error {
public:
  Error(ErrKind kind, std::string msg)
      : std::runtime_error(err_kind_name(kind) + std::string(": ") + msg),
        kind_(kind), msg_(std::move(msg)) {}
  ErrKind kind() const { return kind_; }
  const std::string& detail() const { return msg_; }

private:
  ErrKind kind_;
  std::string msg_;
};

[[noreturn]] inline void fail(ErrKind k, const std::string& msg) {
  throw Error(k, msg);
}

inline const char* err_kind_name(ErrKind k) {
  switch (k) {
    case ErrKind::Undefined: return "Undefined";
    case ErrKind::NotLimit: return "NotLimit";
    case ErrKind::NotFinite: return "NotFinite";
    case ErrKind::NotInfinite: return "NotInfinite";
    case ErrKind::NotCompact: return "NotCompact";
    case ErrKind::BudgetExceeded: return "BudgetExceeded";
    case ErrKind::GuardGap: return "GuardGap";
    case ErrKind::BadSpec: return "BadSpec";
    case ErrKind::BadName: return "BadName";
    case ErrKind::IsMember: return "IsMember";
    case ErrKind::NoWitness: return "NoWitness";
    case ErrKind::NoRefutation: return "NoRefutation";
    case ErrKind::FiberNotSmall: return "FiberNotSmall";
    case ErrKind::HypothesisFailed: return "HypothesisFailed";
    case ErrKind::WitnessRejected: return "WitnessRejected";
    case ErrKind::OracleFailed: return "OracleFailed";
    case ErrKind::UnsupportedRows: return "UnsupportedRows";
    case ErrKind::CarrierMismatch: return "CarrierMismatch";
    case ErrKind::Syntax: return "Syntax";
    case ErrKind::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace ordlab
