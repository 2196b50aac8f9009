#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace magtor {

// Failure categories surfaced by the library. The CLI echoes the name of the
// code on precondition failures, so keep the names stable.
enum class ErrorCode {
  SchemaViolation,
  DimensionMismatch,
  OddDimension,
  MetricNotSymmetric,
  MetricNotPositiveDefinite,
  MagneticNotSkew,
  MagneticDegenerate,
  PairingFailure,
  NotPerfectSquare,
  DegenerateInput,
  InvalidFactors,
  NotUnimodular,
  NonIntegralVolume,
  CutoffTooSmall,
  LevelMismatch,
  InsufficientCutoff,
  InconsistentSpectrum,
  NotSymplectic,
  SingularTransform,
  BoundTooLarge,
  InvalidArgument,
  Internal,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::MetricNotSymmetric: return "MetricNotSymmetric";
    case ErrorCode::MetricNotPositiveDefinite: return "MetricNotPositiveDefinite";
    case ErrorCode::MagneticNotSkew: return "MagneticNotSkew";
    case ErrorCode::MagneticDegenerate: return "MagneticDegenerate";
    case ErrorCode::PairingFailure: return "PairingFailure";
    case ErrorCode::NotPerfectSquare: return "NotPerfectSquare";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::InvalidFactors: return "InvalidFactors";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::NonIntegralVolume: return "NonIntegralVolume";
    case ErrorCode::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorCode::LevelMismatch: return "LevelMismatch";
    case ErrorCode::InsufficientCutoff: return "InsufficientCutoff";
    case ErrorCode::InconsistentSpectrum: return "InconsistentSpectrum";
    case ErrorCode::NotSymplectic: return "NotSymplectic";
    case ErrorCode::SingularTransform: return "SingularTransform";
    case ErrorCode::BoundTooLarge: return "BoundTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace magtor
