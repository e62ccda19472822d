#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace torusinv {

enum class ErrorCode {
    InvalidInput,
    DegenerateSegment,
    NearTangency,
    NonImmersion,
    PointOnCurve,
    BranchDiscontinuity,
    AmbiguousClustering,
    NonConvergence,
    ClosureFailure,
    InvalidResonance,
    CollisionPoint,
    NoLibration,
    QuadratureFailure,
    ResonanceOutOfRange,
    KindUnavailable,
    TangentialCrossing,
    Unsupported,
    GenericityFailure,
    Disagreement,
    ResolutionLimit,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace torusinv
