#include "ruledfib/error.hpp"

namespace ruledfib {

std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPrime: return "NonPrime";
    case ErrorKind::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::MixedFields: return "MixedFields";
    case ErrorKind::SingularCurve: return "SingularCurve";
    case ErrorKind::MixedCurves: return "MixedCurves";
    case ErrorKind::CharZero: return "CharZero";
    case ErrorKind::IrrationalKernel: return "IrrationalKernel";
    case ErrorKind::OrderOne: return "OrderOne";
    case ErrorKind::NeedsFieldExtension: return "NeedsFieldExtension";
    case ErrorKind::UnknownOrder: return "UnknownOrder";
    case ErrorKind::UnsupportedShape: return "UnsupportedShape";
    case ErrorKind::UnsupportedExponent: return "UnsupportedExponent";
    case ErrorKind::RuleHypothesisUnmet: return "RuleHypothesisUnmet";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::InfiniteOrder: return "InfiniteOrder";
    case ErrorKind::MixedSurfaces: return "MixedSurfaces";
    case ErrorKind::OutOfScope: return "OutOfScope";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::MixedMultiplicities: return "MixedMultiplicities";
    case ErrorKind::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorKind::UnsupportedCase: return "UnsupportedCase";
    case ErrorKind::InseparableInput: return "InseparableInput";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnreachableOverField: return "UnreachableOverField";
  }
  return "Unknown";
}

}  // namespace ruledfib
