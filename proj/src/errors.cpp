#include "torusinv/errors.hpp"
#include "torusinv/half_integer.hpp"

namespace torusinv {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::DegenerateSegment: return "DegenerateSegment";
        case ErrorCode::NearTangency: return "NearTangency";
        case ErrorCode::NonImmersion: return "NonImmersion";
        case ErrorCode::PointOnCurve: return "PointOnCurve";
        case ErrorCode::BranchDiscontinuity: return "BranchDiscontinuity";
        case ErrorCode::AmbiguousClustering: return "AmbiguousClustering";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::ClosureFailure: return "ClosureFailure";
        case ErrorCode::InvalidResonance: return "InvalidResonance";
        case ErrorCode::CollisionPoint: return "CollisionPoint";
        case ErrorCode::NoLibration: return "NoLibration";
        case ErrorCode::QuadratureFailure: return "QuadratureFailure";
        case ErrorCode::ResonanceOutOfRange: return "ResonanceOutOfRange";
        case ErrorCode::KindUnavailable: return "KindUnavailable";
        case ErrorCode::TangentialCrossing: return "TangentialCrossing";
        case ErrorCode::Unsupported: return "Unsupported";
        case ErrorCode::GenericityFailure: return "GenericityFailure";
        case ErrorCode::Disagreement: return "Disagreement";
        case ErrorCode::ResolutionLimit: return "ResolutionLimit";
    }
    return "Unknown";
}

std::string to_string(HalfInteger h) {
    if (h.is_integer()) return std::to_string(h.twice / 2);
    return std::to_string(h.twice) + "/2";
}

}  // namespace torusinv
