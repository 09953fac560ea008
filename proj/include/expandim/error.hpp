#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace expandim {

enum class ErrorCode {
  DivisionByZero,
  FieldMismatch,
  NotPrime,
  ZeroOrConstantPolynomial,
  DimensionMismatch,
  BudgetExceeded,
  InternalError,
  ModularDegeneracy,
  DimensionTooSmall,
  InvalidPermutation,
  DegreeTooSmall,
  NumericalFailure,
  TrivialRepresentation,
  NotIrreducible,
  RankMismatch,
  InfiniteField,
  StrategyUnavailable,
  ParseError,
  ConsistencyViolation,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace expandim
