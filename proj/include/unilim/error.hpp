#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace unilim {

enum class ErrorKind {
  ParseError,
  InvalidArgument,
  NotPseudometric,
  TriangleViolation,
  NestingViolation,
  SubspaceViolation,
  IndexOutOfRange,
  LevelMismatch,
  LevelOutOfRange,
  NotReflexive,
  NotUniform,
  NotMonotone,
  NotAnEntourage,
  PreconditionFailed,
  StartMismatch,
  NotInverse,
  LevelCountMismatch,
  NotAGroup,
  InvarianceViolation,
  GroundMismatch,
  ProfileTooLarge,
  UnknownTheoremId,
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotPseudometric: return "NotPseudometric";
    case ErrorKind::TriangleViolation: return "TriangleViolation";
    case ErrorKind::NestingViolation: return "NestingViolation";
    case ErrorKind::SubspaceViolation: return "SubspaceViolation";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::LevelMismatch: return "LevelMismatch";
    case ErrorKind::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorKind::NotReflexive: return "NotReflexive";
    case ErrorKind::NotUniform: return "NotUniform";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::NotAnEntourage: return "NotAnEntourage";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::StartMismatch: return "StartMismatch";
    case ErrorKind::NotInverse: return "NotInverse";
    case ErrorKind::LevelCountMismatch: return "LevelCountMismatch";
    case ErrorKind::NotAGroup: return "NotAGroup";
    case ErrorKind::InvarianceViolation: return "InvarianceViolation";
    case ErrorKind::GroundMismatch: return "GroundMismatch";
    case ErrorKind::ProfileTooLarge: return "ProfileTooLarge";
    case ErrorKind::UnknownTheoremId: return "UnknownTheoremId";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an Error. `witness()` holds
/// the indices named by the diagnostic (level first, then points), so
/// callers can inspect the offending configuration without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::vector<std::size_t> witness = {})
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what),
        kind_(kind),
        witness_(std::move(witness)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::vector<std::size_t>& witness() const noexcept { return witness_; }

 private:
  ErrorKind kind_;
  std::vector<std::size_t> witness_;
};

}  // namespace unilim
