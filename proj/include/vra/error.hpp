#pragma once

#include <stdexcept>
#include <string>

namespace vra {

enum class ErrorKind {
  Domain,
  RelationViolation,
  DimensionMismatch,
  NotInSubgroup,
  Unsupported,
  GroupMismatch,
  SubgroupUnsupported,
  BasisMismatch,
  WeightMismatch,
  TypeMismatch,
  PrecisionExhausted,
  HypothesisViolated,
  DegreeMismatch,
  DepthExceeded,
  NotFound,
  SingularLeadingCoefficient,
  NotCuspidal,
  IllConditioned,
  CocycleFitFailed,
  BelowConvergenceWeight,
  DepthUnsupported,
  QuadratureNotConverged,
  NonconvergentWarning,
  SyntaxError,
  ArityError,
  UnknownConstructor,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }
  const char* kind_name() const { return error_kind_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace vra
