#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pbl {

enum class ErrorKind {
  DeterminantViolation,
  DegenerateParameters,
  ConstraintViolation,
  LambdaExcluded,
  OrderingViolation,
  ConstraintResidualTooLarge,
  DimensionTooSmall,
  ConditioningFailure,
  NotSquareIntegrable,
  QuadratureNotConverged,
  DomainViolation,
  UnknownDecay,
  ConfigInvalid,
  IoFailure,
};

constexpr std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DeterminantViolation: return "DeterminantViolation";
    case ErrorKind::DegenerateParameters: return "DegenerateParameters";
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::LambdaExcluded: return "LambdaExcluded";
    case ErrorKind::OrderingViolation: return "OrderingViolation";
    case ErrorKind::ConstraintResidualTooLarge: return "ConstraintResidualTooLarge";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::ConditioningFailure: return "ConditioningFailure";
    case ErrorKind::NotSquareIntegrable: return "NotSquareIntegrable";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::UnknownDecay: return "UnknownDecay";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

/// Base of every exception thrown by the library. The message is prefixed
/// with the kind name so command-line output stays greppable.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

template <ErrorKind K>
class KindedError : public Error {
 public:
  explicit KindedError(const std::string& what) : Error(K, what) {}
};

using DeterminantViolation = KindedError<ErrorKind::DeterminantViolation>;
using DegenerateParameters = KindedError<ErrorKind::DegenerateParameters>;
using ConstraintViolation = KindedError<ErrorKind::ConstraintViolation>;
using LambdaExcluded = KindedError<ErrorKind::LambdaExcluded>;
using OrderingViolation = KindedError<ErrorKind::OrderingViolation>;
using ConstraintResidualTooLarge = KindedError<ErrorKind::ConstraintResidualTooLarge>;
using DimensionTooSmall = KindedError<ErrorKind::DimensionTooSmall>;
using ConditioningFailure = KindedError<ErrorKind::ConditioningFailure>;
using NotSquareIntegrable = KindedError<ErrorKind::NotSquareIntegrable>;
using QuadratureNotConverged = KindedError<ErrorKind::QuadratureNotConverged>;
using DomainViolation = KindedError<ErrorKind::DomainViolation>;
using UnknownDecay = KindedError<ErrorKind::UnknownDecay>;
using ConfigInvalid = KindedError<ErrorKind::ConfigInvalid>;
using IoFailure = KindedError<ErrorKind::IoFailure>;

}  // namespace pbl
