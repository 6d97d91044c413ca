#pragma once

#include <stdexcept>
#include <string>

namespace mixlink {

enum class ErrorCode {
  // geometry
  EmptySet,
  DimensionTooLarge,
  ZeroWeight,
  ZeroLastWeight,
  // special functions and quadrature
  DomainError,
  ParameterError,
  NonFinite,
  ToleranceNotMet,
  // distributions
  InvalidModel,
  InvalidData,
  NonPositiveShape,
  // mcmc
  TuningFailed,
  NumericalUnderflow,
  // front end
  ConfigError,
  SchemaMismatch,
  IoError,
};

const char* to_string(ErrorCode code);

// All library failures are reported through this type; code() identifies the
// failure class so callers (the CLI in particular) can map it to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::ZeroWeight: return "ZeroWeight";
    case ErrorCode::ZeroLastWeight: return "ZeroLastWeight";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ParameterError: return "ParameterError";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::InvalidData: return "InvalidData";
    case ErrorCode::NonPositiveShape: return "NonPositiveShape";
    case ErrorCode::TuningFailed: return "TuningFailed";
    case ErrorCode::NumericalUnderflow: return "NumericalUnderflow";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace mixlink
