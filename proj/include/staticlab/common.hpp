#ifndef STATICLAB_COMMON_HPP
#define STATICLAB_COMMON_HPP

// Shared error type and small numeric helpers used across the library.

#include <cmath>
#include <stdexcept>
#include <string>

namespace staticlab {

enum class Errc {
  OutOfDomain,
  StencilOutOfDomain,
  EmptyDomainIntersection,
  DomainTooSmall,
  NonFinite,
  InvalidTolerance,
  StepFailure,
  DegenerateInitialization,
  WrongModelClass,
  SingularMetric,
  NonPositiveWarp,
  HorizonViolation,
  IntegrabilityMismatch,
  InvalidR,
  TooFewSamples,
  MissingScalar,
  ParseError,
  IoError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::StencilOutOfDomain: return "StencilOutOfDomain";
    case Errc::EmptyDomainIntersection: return "EmptyDomainIntersection";
    case Errc::DomainTooSmall: return "DomainTooSmall";
    case Errc::NonFinite: return "NonFinite";
    case Errc::InvalidTolerance: return "InvalidTolerance";
    case Errc::StepFailure: return "StepFailure";
    case Errc::DegenerateInitialization: return "DegenerateInitialization";
    case Errc::WrongModelClass: return "WrongModelClass";
    case Errc::SingularMetric: return "SingularMetric";
    case Errc::NonPositiveWarp: return "NonPositiveWarp";
    case Errc::HorizonViolation: return "HorizonViolation";
    case Errc::IntegrabilityMismatch: return "IntegrabilityMismatch";
    case Errc::InvalidR: return "InvalidR";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::MissingScalar: return "MissingScalar";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

inline bool is_finite(double v) { return std::isfinite(v); }

inline void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) fail(Errc::NonFinite, what);
}

}  // namespace staticlab

#endif  // STATICLAB_COMMON_HPP
