#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ruledfib {

// Every domain failure carries the name of its error kind, so callers (and
// the CLI) can report it without parsing messages.
enum class ErrorKind {
  NonPrime,
  DegreeOutOfRange,
  DivisionByZero,
  MixedFields,
  SingularCurve,
  MixedCurves,
  CharZero,
  IrrationalKernel,
  OrderOne,
  NeedsFieldExtension,
  UnknownOrder,
  UnsupportedShape,
  UnsupportedExponent,
  RuleHypothesisUnmet,
  UnsupportedDegree,
  InfiniteOrder,
  MixedSurfaces,
  OutOfScope,
  EmptyInput,
  MixedMultiplicities,
  ExponentOutOfRange,
  UnsupportedCase,
  InseparableInput,
  InvalidInput,
  ParseError,
  UnreachableOverField,
};

std::string_view error_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

// Raised when a computation needs points that are not rational over the
// working field. `degree` is the smallest extension degree found by search
// that would suffice, or 0 if none was found within the bound.
class NeedsExtension : public Error {
 public:
  NeedsExtension(int degree, const std::string& what)
      : Error(ErrorKind::NeedsFieldExtension, what), degree_(degree) {}

  int degree() const noexcept { return degree_; }

 private:
  int degree_;
};

}  // namespace ruledfib
