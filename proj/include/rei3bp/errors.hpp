#pragma once

#include <stdexcept>
#include <string>

namespace rei3bp {

// Numeric values are part of the C ABI (see rei3bp.h); do not renumber.
enum class ErrorCode : int {
  Ok = 0,
  InvalidArgument = 1,
  Domain = 2,
  NonConvergence = 3,
  UnsupportedPrecision = 4,
  RadiusUnderflow = 5,
  HorizonExceeded = 6,
  StepUnderflow = 7,
  ToleranceFailure = 8,
  ContourFailure = 9,
  SeedTooClose = 10,
  TracingLost = 11,
  SectionMiss = 12,
  NoSignChange = 13,
  NoHomoclinic = 14,
  Internal = 99,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::UnsupportedPrecision: return "UnsupportedPrecision";
    case ErrorCode::RadiusUnderflow: return "RadiusUnderflow";
    case ErrorCode::HorizonExceeded: return "HorizonExceeded";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::ToleranceFailure: return "ToleranceFailure";
    case ErrorCode::ContourFailure: return "ContourFailure";
    case ErrorCode::SeedTooClose: return "SeedTooClose";
    case ErrorCode::TracingLost: return "TracingLost";
    case ErrorCode::SectionMiss: return "SectionMiss";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::NoHomoclinic: return "NoHomoclinic";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace rei3bp
