#pragma once

#include <stdexcept>
#include <string>

namespace tdho {

// Every failure surfaced by the library is an Error with a stable kind tag,
// so CLI handlers and tests can dispatch without string matching.
enum class ErrorKind {
  InvalidModel,
  NonConvergent,
  AssumptionViolated,
  DegenerateDenominator,
  ShapeMismatch,
  ZeroParameter,
  AliasRisk,
  MissingZeta,
  OutsideValidity,
  ZeroZeta,
  BlowupDetected,
  CFLViolation,
  BoundaryMass,
  QuadratureUnderflow,
  FitFailed,
  NotSettled,
  DomainError,
  SmallnessViolated,
  InsufficientSamples,
  MissingWeightedNorms,
  ConfigInvalid,
  Io,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::AssumptionViolated: return "AssumptionViolated";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::ZeroParameter: return "ZeroParameter";
    case ErrorKind::AliasRisk: return "AliasRisk";
    case ErrorKind::MissingZeta: return "MissingZeta";
    case ErrorKind::OutsideValidity: return "OutsideValidity";
    case ErrorKind::ZeroZeta: return "ZeroZeta";
    case ErrorKind::BlowupDetected: return "BlowupDetected";
    case ErrorKind::CFLViolation: return "CFLViolation";
    case ErrorKind::BoundaryMass: return "BoundaryMass";
    case ErrorKind::QuadratureUnderflow: return "QuadratureUnderflow";
    case ErrorKind::FitFailed: return "FitFailed";
    case ErrorKind::NotSettled: return "NotSettled";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::SmallnessViolated: return "SmallnessViolated";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::MissingWeightedNorms: return "MissingWeightedNorms";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) fail(kind, what);
}

}  // namespace tdho
