#pragma once

#include <stdexcept>
#include <string>

namespace riemann_lab {

/// Every failure the library can signal. The CLI maps each to its own exit code.
enum class ErrorKind {
  DegenerateFlux = 10,
  FullDegeneracy,
  CoincidentStates,
  OffCurve,
  OutsideFan,
  NoRarefaction,
  Pole,
  VerticalBranch,
  NotOnCriticalLine,
  NoDeltaSpeed,
  DegenerateQuadratic,
  NotInDeltaRegime,
  NonGrowingDelta,
  UnsupportedAnsatz,
  AmbiguousRoot,
  NoIntersection,
  BlowupDetected,
  StagnantField,
  NotSelfSimilarYet,
  NoSingularityDetected,
  InvariantRegionViolation,
  Desingularization,
  SpectrumMismatch,
  HeteroclinicNotFound,
  ProfileNotFound,
  StepSizeUnderflow,
  Config,
};

inline const char* error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegenerateFlux: return "DegenerateFluxError";
    case ErrorKind::FullDegeneracy: return "FullDegeneracyError";
    case ErrorKind::CoincidentStates: return "CoincidentStatesError";
    case ErrorKind::OffCurve: return "OffCurveError";
    case ErrorKind::OutsideFan: return "OutsideFanError";
    case ErrorKind::NoRarefaction: return "NoRarefactionError";
    case ErrorKind::Pole: return "PoleError";
    case ErrorKind::VerticalBranch: return "VerticalBranchError";
    case ErrorKind::NotOnCriticalLine: return "NotOnCriticalLineError";
    case ErrorKind::NoDeltaSpeed: return "NoDeltaSpeedError";
    case ErrorKind::DegenerateQuadratic: return "DegenerateQuadraticError";
    case ErrorKind::NotInDeltaRegime: return "NotInDeltaRegimeError";
    case ErrorKind::NonGrowingDelta: return "NonGrowingDeltaError";
    case ErrorKind::UnsupportedAnsatz: return "UnsupportedAnsatzError";
    case ErrorKind::AmbiguousRoot: return "AmbiguousRootFinding";
    case ErrorKind::NoIntersection: return "NoIntersectionError";
    case ErrorKind::BlowupDetected: return "BlowupDetected";
    case ErrorKind::StagnantField: return "StagnantFieldError";
    case ErrorKind::NotSelfSimilarYet: return "NotSelfSimilarYetError";
    case ErrorKind::NoSingularityDetected: return "NoSingularityDetected";
    case ErrorKind::InvariantRegionViolation: return "InvariantRegionViolation";
    case ErrorKind::Desingularization: return "DesingularizationError";
    case ErrorKind::SpectrumMismatch: return "SpectrumMismatch";
    case ErrorKind::HeteroclinicNotFound: return "HeteroclinicNotFound";
    case ErrorKind::ProfileNotFound: return "ProfileNotFound";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::Config: return "ConfigError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

template <ErrorKind K>
class TypedError : public Error {
 public:
  explicit TypedError(const std::string& what) : Error(K, what) {}
};

using DegenerateFluxError = TypedError<ErrorKind::DegenerateFlux>;
using FullDegeneracyError = TypedError<ErrorKind::FullDegeneracy>;
using CoincidentStatesError = TypedError<ErrorKind::CoincidentStates>;
using OffCurveError = TypedError<ErrorKind::OffCurve>;
using OutsideFanError = TypedError<ErrorKind::OutsideFan>;
using NoRarefactionError = TypedError<ErrorKind::NoRarefaction>;
using PoleError = TypedError<ErrorKind::Pole>;
using VerticalBranchError = TypedError<ErrorKind::VerticalBranch>;
using NotOnCriticalLineError = TypedError<ErrorKind::NotOnCriticalLine>;
using NoDeltaSpeedError = TypedError<ErrorKind::NoDeltaSpeed>;
using DegenerateQuadraticError = TypedError<ErrorKind::DegenerateQuadratic>;
using NotInDeltaRegimeError = TypedError<ErrorKind::NotInDeltaRegime>;
using NonGrowingDeltaError = TypedError<ErrorKind::NonGrowingDelta>;
using UnsupportedAnsatzError = TypedError<ErrorKind::UnsupportedAnsatz>;
using AmbiguousRootFinding = TypedError<ErrorKind::AmbiguousRoot>;
using NoIntersectionError = TypedError<ErrorKind::NoIntersection>;
using BlowupDetected = TypedError<ErrorKind::BlowupDetected>;
using StagnantFieldError = TypedError<ErrorKind::StagnantField>;
using NotSelfSimilarYetError = TypedError<ErrorKind::NotSelfSimilarYet>;
using NoSingularityDetected = TypedError<ErrorKind::NoSingularityDetected>;
using InvariantRegionViolation = TypedError<ErrorKind::InvariantRegionViolation>;
using DesingularizationError = TypedError<ErrorKind::Desingularization>;
using SpectrumMismatch = TypedError<ErrorKind::SpectrumMismatch>;
using HeteroclinicNotFound = TypedError<ErrorKind::HeteroclinicNotFound>;
using ProfileNotFound = TypedError<ErrorKind::ProfileNotFound>;
using StepSizeUnderflow = TypedError<ErrorKind::StepSizeUnderflow>;
using ConfigError = TypedError<ErrorKind::Config>;

}  // namespace riemann_lab
