#ifndef MBP_ERROR_HPP
#define MBP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mbp {

enum class ErrorCode {
  ParamOutOfRange,
  ZeroNilpotentEntry,
  RationalRatioViolation,
  JacobiSumViolation,
  LengthMismatch,
  SizeMismatch,
  NotUnipotent,
  DegreeViolation,
  NonDiagonalCoefficient,
  PoleOnSupport,
  OutOfSupport,
  MomentOverflow,
  MomentTableTooSmall,
  SingularGram,
  QuadratureNonConvergence,
  OddOrder,
  InternalCheckFailure,
  ConfigError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::ZeroNilpotentEntry: return "ZeroNilpotentEntry";
    case ErrorCode::RationalRatioViolation: return "RationalRatioViolation";
    case ErrorCode::JacobiSumViolation: return "JacobiSumViolation";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::NotUnipotent: return "NotUnipotent";
    case ErrorCode::DegreeViolation: return "DegreeViolation";
    case ErrorCode::NonDiagonalCoefficient: return "NonDiagonalCoefficient";
    case ErrorCode::PoleOnSupport: return "PoleOnSupport";
    case ErrorCode::OutOfSupport: return "OutOfSupport";
    case ErrorCode::MomentOverflow: return "MomentOverflow";
    case ErrorCode::MomentTableTooSmall: return "MomentTableTooSmall";
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorCode::OddOrder: return "OddOrder";
    case ErrorCode::InternalCheckFailure: return "InternalCheckFailure";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Exception type carrying a machine-readable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mbp

#endif  // MBP_ERROR_HPP
