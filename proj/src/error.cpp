#include "grpd/error.hpp"

namespace grpd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyUnitSpace: return "EmptyUnitSpace";
    case ErrorCode::DanglingIdentifier: return "DanglingIdentifier";
    case ErrorCode::DuplicateIdentifier: return "DuplicateIdentifier";
    case ErrorCode::MissingComposite: return "MissingComposite";
    case ErrorCode::InconsistentComposite: return "InconsistentComposite";
    case ErrorCode::AssociativityViolation: return "AssociativityViolation";
    case ErrorCode::UnitViolation: return "UnitViolation";
    case ErrorCode::InverseViolation: return "InverseViolation";
    case ErrorCode::NotAGroup: return "NotAGroup";
    case ErrorCode::NotAnAction: return "NotAnAction";
    case ErrorCode::UnknownUnit: return "UnknownUnit";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ZeroFibre: return "ZeroFibre";
    case ErrorCode::GroupoidMismatch: return "GroupoidMismatch";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::NotTransitive: return "NotTransitive";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::ZeroVectorOnOrbit: return "ZeroVectorOnOrbit";
    case ErrorCode::NotUnitVector: return "NotUnitVector";
    case ErrorCode::MaxDepthExceeded: return "MaxDepthExceeded";
    case ErrorCode::CompletenessFailure: return "CompletenessFailure";
    case ErrorCode::NotInSpan: return "NotInSpan";
    case ErrorCode::NotCoOrbital: return "NotCoOrbital";
    case ErrorCode::IncompleteTable: return "IncompleteTable";
    case ErrorCode::EmptyHomSet: return "EmptyHomSet";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownArtifact: return "UnknownArtifact";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

}  // namespace grpd
