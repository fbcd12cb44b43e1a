#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pitower {

enum class ErrorCode {
  NonPrime,
  ReducibleUnramPoly,
  NotEisenstein,
  SpecMismatch,
  NonUnit,
  ShapeMismatch,
  NonzeroConstantTerm,
  NonUnitLinearTerm,
  DegradedSeries,
  NotLTSeries,
  PrecisionExhausted,
  NotPPower,
  Mismatch,
  NoUnitCoefficient,
  TruncationTooSmall,
  NotFullHeight,
  BudgetExceeded,
  PrecisionTooLow,
  NonMultiplicativeSeries,
  RelationViolated,
  CatalogViolation,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can report the failing step without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace pitower
