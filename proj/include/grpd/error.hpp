#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace grpd {

enum class ErrorCode {
  EmptyUnitSpace,
  DanglingIdentifier,
  DuplicateIdentifier,
  MissingComposite,
  InconsistentComposite,
  AssociativityViolation,
  UnitViolation,
  InverseViolation,
  NotAGroup,
  NotAnAction,
  UnknownUnit,
  NotHermitian,
  RankDeficient,
  ShapeMismatch,
  ZeroFibre,
  GroupoidMismatch,
  NotInvariant,
  NotTransitive,
  NotIrreducible,
  ZeroVectorOnOrbit,
  NotUnitVector,
  MaxDepthExceeded,
  CompletenessFailure,
  NotInSpan,
  NotCoOrbital,
  IncompleteTable,
  EmptyHomSet,
  IndexOutOfRange,
  ParseError,
  UnknownArtifact,
  UnsupportedFormat,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a code and a message naming
/// the offending element(s). `what()` is "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace grpd
