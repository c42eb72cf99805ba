#ifndef LARVEST_ERRORS_HPP
#define LARVEST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace larvest {

enum class ErrorCode {
  // csv ingestion / data model
  MalformedRow,
  EmptyDataset,
  DuplicateHeaderMismatch,
  InvariantViolation,
  NonMonotoneTime,
  TooFewSamples,
  ProfileCoverageGap,
  BadTimeOrder,
  // local smoothing
  DegenerateDesign,
  SingularSystem,
  // registration
  BoundaryMaximum,
  MonotonicityViolation,
  OutOfRange,
  // temperature field
  EmptyWindow,
  NonMonotoneBlend,
  // growth dynamics
  BranchOutOfRange,
  InversionFailure,
  // inference
  NoAdmissibleCandidate,
  ZeroPosteriorMass,
  VarianceUndefined,
  InsufficientSpan,
  // synthetic model
  BelowThreshold,
  // serialization
  BadFieldFile,
};

const char* to_string(ErrorCode code);

/// Library-wide exception. `code()` identifies the failure class so callers
/// (and the CLI exit-code map) can dispatch without parsing messages.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace larvest

#endif
