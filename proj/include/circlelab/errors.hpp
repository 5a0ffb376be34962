#pragma once

#include <stdexcept>
#include <string>

namespace circlelab {

/// Classification of every failure the library can report.
enum class ErrorCode {
  ConstraintViolation,
  TangentSingularity,
  CollisionSingularity,
  ZeroMass,
  WrongKind,
  DegenerateVector,
  GridMismatch,
  SingularityEncountered,
  StepLimitExceeded,
  DegenerateLeadingCoefficient,
  RepeatedRoots,
  PoleHit,
  ContinuationFailure,
  ConfigError,
};

const char* to_string(ErrorCode code) noexcept;

/// Base class for all circlelab errors; carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ConstraintViolation : Error {
  explicit ConstraintViolation(const std::string& m) : Error(ErrorCode::ConstraintViolation, m) {}
};
struct TangentSingularity : Error {
  explicit TangentSingularity(const std::string& m) : Error(ErrorCode::TangentSingularity, m) {}
};
struct CollisionSingularity : Error {
  explicit CollisionSingularity(const std::string& m) : Error(ErrorCode::CollisionSingularity, m) {}
};
struct ZeroMass : Error {
  explicit ZeroMass(const std::string& m) : Error(ErrorCode::ZeroMass, m) {}
};
struct WrongKind : Error {
  explicit WrongKind(const std::string& m) : Error(ErrorCode::WrongKind, m) {}
};
struct DegenerateVector : Error {
  explicit DegenerateVector(const std::string& m) : Error(ErrorCode::DegenerateVector, m) {}
};
struct GridMismatch : Error {
  explicit GridMismatch(const std::string& m) : Error(ErrorCode::GridMismatch, m) {}
};

/// Raised by the integrator when the right-hand side became singular inside a
/// step; `where` is the singular time localized by step bisection.
struct SingularityEncountered : Error {
  SingularityEncountered(const std::string& m, double where)
      : Error(ErrorCode::SingularityEncountered, m), time(where) {}
  double time;
};
struct StepLimitExceeded : Error {
  explicit StepLimitExceeded(const std::string& m) : Error(ErrorCode::StepLimitExceeded, m) {}
};
struct DegenerateLeadingCoefficient : Error {
  explicit DegenerateLeadingCoefficient(const std::string& m)
      : Error(ErrorCode::DegenerateLeadingCoefficient, m) {}
};
struct RepeatedRoots : Error {
  explicit RepeatedRoots(const std::string& m) : Error(ErrorCode::RepeatedRoots, m) {}
};
struct PoleHit : Error {
  explicit PoleHit(const std::string& m) : Error(ErrorCode::PoleHit, m) {}
};

/// Raised when the quadrature inversion cannot be continued past `last_good_t`.
struct ContinuationFailure : Error {
  ContinuationFailure(const std::string& m, double t)
      : Error(ErrorCode::ContinuationFailure, m), last_good_t(t) {}
  double last_good_t;
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error(ErrorCode::ConfigError, m) {}
};

}  // namespace circlelab
