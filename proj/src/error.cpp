#include "hamforge/error.hpp"

namespace hamforge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnboundParameter: return "UnboundParameter";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::NonAffineExponent: return "NonAffineExponent";
    case ErrorCode::NegativePower: return "NegativePower";
    case ErrorCode::ChartMismatch: return "ChartMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MissingSolvedForm: return "MissingSolvedForm";
    case ErrorCode::SingularSolvedForm: return "SingularSolvedForm";
    case ErrorCode::NotPoisson: return "NotPoisson";
    case ErrorCode::SingularBase: return "SingularBase";
    case ErrorCode::NotJacobi: return "NotJacobi";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::ParamConstraint: return "ParamConstraint";
    case ErrorCode::RankDeficientSampling: return "RankDeficientSampling";
    case ErrorCode::UnverifiedBasis: return "UnverifiedBasis";
    case ErrorCode::Divergence: return "Divergence";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
  }
  return "Unknown";
}

}  // namespace hamforge
