#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hamforge {

enum class ErrorCode {
  InvalidArgument,
  UnboundParameter,
  UnboundVariable,
  UnknownVariable,
  NonAffineExponent,
  NegativePower,
  ChartMismatch,
  DimensionMismatch,
  MissingSolvedForm,
  SingularSolvedForm,
  NotPoisson,
  SingularBase,
  NotJacobi,
  ConstraintViolation,
  ParamConstraint,
  RankDeficientSampling,
  UnverifiedBasis,
  Divergence,
  StepUnderflow,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hamforge
