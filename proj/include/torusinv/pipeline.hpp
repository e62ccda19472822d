#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "torusinv/euler.hpp"
#include "torusinv/invariants.hpp"
#include "torusinv/kepler.hpp"

namespace torusinv {

// Orbit synthesis followed by the invariant pipeline, with the sample count
// doubled until two successive resolutions report the same invariants.

inline constexpr GenericityThresholds kRkpThresholds{1e-3, 1e-4};
// near-collision passes of thin Euler tori cross almost antiparallel
inline constexpr GenericityThresholds kEulerThresholds{1e-5, 1e-4};

struct RunOptions {
    std::size_t samples = 0;  // 0: 4096 per RKP revolution, 2048 per Euler lambda-cycle
    int max_doublings = 3;
    std::optional<GenericityThresholds> thresholds;
};

struct RkpRun {
    RkpTorusParams params;
    ClosedCurve curve;
    InvariantReport report;
    InvariantPair formula;
    std::size_t samples = 0;  // resolution of the reported curve
    double drift = 0.0;       // energy and angular momentum, relative
    double closure_error = 0.0;
    bool match() const { return report.j1 == formula.j1 && report.j2 == formula.j2; }
};

RkpRun run_rkp(const RkpTorusParams& params, const RunOptions& opts = {});

// relative deviation of E and L from their values on the torus
double rkp_drift(const RkpTorusParams& params, const ClosedCurve& curve);

struct EulerRun {
    EulerTorusParams params;
    EulerOrbit orbit;
    InvariantReport report;
    InvariantPair formula;
    std::size_t samples = 0;
    ConservationDrift drift;
    std::vector<double> phases_tried;
    bool match() const { return report.j1 == formula.j1 && report.j2 == formula.j2; }
};

// Generic phases used when none is given: 0.25, then draws from a seeded
// generator in [0.1, 0.4] (units of T/(2kl) from the brake-brake class).
std::vector<double> generic_phases(std::uint64_t seed, int count = 5);

// Below this lambda_max the near-collision passes of a torus cross at angles
// and parameter gaps that double precision no longer separates; runs on
// such tori throw ResolutionLimit instead of returning noise.
inline constexpr double kMinLambdaMax = 1e-5;

// Tries each phase in turn until the orbit passes the genericity gate.
EulerRun run_euler_generic(double mu, int k, int l, std::optional<double> c, const std::vector<double>& phases,
                           const RunOptions& opts = {});
EulerRun run_euler_generic(const EulerTorusParams& torus, const RunOptions& opts = {});

struct DistinguishedRun {
    EulerTorusParams params;
    EulerOrbit orbit;
    std::vector<MultiplePoint> clusters;  // on the doubly traced reversal arc
    // both empty for collision-collision orbits, which have no count formula
    std::optional<int> quadruple_formula;
    std::optional<DistinguishedInvariants> predicted;  // from the measured cluster count
    bool all_quadruple = false;
    AxisCounts axis;
    AxisCounts cycles;
    bool match() const {
        return all_quadruple && (!quadruple_formula || static_cast<int>(clusters.size()) == *quadruple_formula);
    }
};

DistinguishedRun run_euler_distinguished(double mu, int k, int l, std::optional<double> c, OrbitKind kind,
                                         const RunOptions& opts = {});

}  // namespace torusinv
