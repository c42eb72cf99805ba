#include "larvest/errors.hpp"

namespace larvest {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::DuplicateHeaderMismatch: return "DuplicateHeaderMismatch";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::NonMonotoneTime: return "NonMonotoneTime";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::ProfileCoverageGap: return "ProfileCoverageGap";
    case ErrorCode::BadTimeOrder: return "BadTimeOrder";
    case ErrorCode::DegenerateDesign: return "DegenerateDesign";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::BoundaryMaximum: return "BoundaryMaximum";
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::NonMonotoneBlend: return "NonMonotoneBlend";
    case ErrorCode::BranchOutOfRange: return "BranchOutOfRange";
    case ErrorCode::InversionFailure: return "InversionFailure";
    case ErrorCode::NoAdmissibleCandidate: return "NoAdmissibleCandidate";
    case ErrorCode::ZeroPosteriorMass: return "ZeroPosteriorMass";
    case ErrorCode::VarianceUndefined: return "VarianceUndefined";
    case ErrorCode::InsufficientSpan: return "InsufficientSpan";
    case ErrorCode::BelowThreshold: return "BelowThreshold";
    case ErrorCode::BadFieldFile: return "BadFieldFile";
  }
  return "UnknownError";
}

} // namespace larvest
