#include "pitower/error.hpp"

namespace pitower {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPrime: return "NonPrime";
    case ErrorCode::ReducibleUnramPoly: return "ReducibleUnramPoly";
    case ErrorCode::NotEisenstein: return "NotEisenstein";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::NonUnit: return "NonUnit";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonzeroConstantTerm: return "NonzeroConstantTerm";
    case ErrorCode::NonUnitLinearTerm: return "NonUnitLinearTerm";
    case ErrorCode::DegradedSeries: return "DegradedSeries";
    case ErrorCode::NotLTSeries: return "NotLTSeries";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::NotPPower: return "NotPPower";
    case ErrorCode::Mismatch: return "Mismatch";
    case ErrorCode::NoUnitCoefficient: return "NoUnitCoefficient";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::NotFullHeight: return "NotFullHeight";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::PrecisionTooLow: return "PrecisionTooLow";
    case ErrorCode::NonMultiplicativeSeries: return "NonMultiplicativeSeries";
    case ErrorCode::RelationViolated: return "RelationViolated";
    case ErrorCode::CatalogViolation: return "CatalogViolation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace pitower
