#include "torusinv/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "torusinv/errors.hpp"

namespace torusinv {

namespace {

bool retryable(ErrorCode c) {
    return c == ErrorCode::GenericityFailure || c == ErrorCode::NearTangency || c == ErrorCode::NonImmersion ||
           c == ErrorCode::PointOnCurve || c == ErrorCode::BranchDiscontinuity ||
           c == ErrorCode::DegenerateSegment;
}

// Runs make(S), make(2S), ... until two successive resolutions agree.
template <class Make>
auto until_stable(std::size_t base, int max_doublings, Make make) {
    using Run = decltype(make(base));
    std::optional<Run> prev;
    std::string last_error;
    ErrorCode last_code = ErrorCode::GenericityFailure;
    for (int i = 0; i <= max_doublings; ++i) {
        const std::size_t s = base << i;
        try {
            Run run = make(s);
            if (prev && prev->report.same_invariants(run.report)) return *prev;
            prev = std::move(run);
        } catch (const Error& e) {
            if (!retryable(e.code())) throw;
            prev.reset();
            last_code = e.code();
            last_error = e.what();
        }
    }
    std::ostringstream msg;
    if (last_error.empty())
        msg << "invariants not stable under sample doubling up to " << (base << max_doublings) << " samples";
    else
        msg << last_error << " (at " << (base << max_doublings) << " samples)";
    throw Error(last_error.empty() ? ErrorCode::GenericityFailure : last_code, msg.str());
}

}  // namespace

double rkp_drift(const RkpTorusParams& params, const ClosedCurve& curve) {
    const double E0 = rkp_energy(params.k, params.l);
    const double a = std::cbrt(static_cast<double>(params.l * params.l) / (params.k * params.k));
    const double sign = params.sense == KeplerSense::Positive ? 1.0 : -1.0;
    const double L0 = sign * std::sqrt(a * (1 - params.eccentricity * params.eccentricity));
    double d = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto s = rkp_state(params, curve.param(i));
        d = std::max(d, std::abs(kepler_energy(s) - E0) / std::max(1.0, std::abs(E0)));
        d = std::max(d, std::abs(kepler_angular_momentum(s) - L0) / std::max(1.0, std::abs(L0)));
    }
    return d;
}

RkpRun run_rkp(const RkpTorusParams& params, const RunOptions& opts) {
    validate(params);
    const auto thr = opts.thresholds.value_or(kRkpThresholds);
    const auto formula = rkp_invariants_formula(params.k, params.l);
    auto run = until_stable(opts.samples ? opts.samples : 4096, opts.max_doublings, [&](std::size_t s) {
        RkpRun r;
        r.params = params;
        r.curve = rkp_orbit(params, s);
        r.report = compute_invariants(r.curve, {0, 0}, thr);
        r.formula = formula;
        r.samples = s;
        return r;
    });
    run.drift = rkp_drift(params, run.curve);
    // closure: distance from the end of the last revolution back to the start
    const double T = run.curve.period();
    const auto end = rkp_state(params, T).q;
    run.closure_error = dist(end, run.curve.point(0)) / run.curve.diameter();
    return run;
}

std::vector<double> generic_phases(std::uint64_t seed, int count) {
    std::vector<double> out{0.25};
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(0.1, 0.4);
    while (static_cast<int>(out.size()) < count) out.push_back(dist(gen));
    return out;
}

EulerRun run_euler_generic(const EulerTorusParams& torus, const RunOptions& opts) {
    if (torus.kind != OrbitKind::Generic) throw Error(ErrorCode::InvalidInput, "generic run needs a generic torus");
    const auto thr = opts.thresholds.value_or(kEulerThresholds);
    const auto formula = euler_invariants_formula(torus.k, torus.l);
    const double lmax = turning_points(torus.euler.mu, torus_offsets(torus.euler)).lambda_max;
    if (lmax < kMinLambdaMax) {
        std::ostringstream msg;
        msg << "torus (" << torus.k << "," << torus.l << ") at mu = " << torus.euler.mu << " is too thin to resolve: lambda_max = "
            << lmax << " < " << kMinLambdaMax;
        throw Error(ErrorCode::ResolutionLimit, msg.str());
    }
    auto run = until_stable(opts.samples ? opts.samples : 2048, opts.max_doublings, [&](std::size_t s) {
        EulerRun r;
        r.params = torus;
        r.orbit = synthesize_orbit(torus, s);
        r.report = compute_invariants(r.orbit.curve, {0, 0}, thr);
        r.formula = formula;
        r.samples = s;
        return r;
    });
    run.drift = conservation_drift(run.orbit);
    run.phases_tried = {torus.phase};
    return run;
}

EulerRun run_euler_generic(double mu, int k, int l, std::optional<double> c, const std::vector<double>& phases,
                           const RunOptions& opts) {
    if (phases.empty()) throw Error(ErrorCode::InvalidInput, "no generic phase to try");
    const auto base = make_torus(mu, k, l, c, OrbitKind::Generic, phases.front());
    std::vector<double> tried;
    std::string last;
    ErrorCode last_code = ErrorCode::GenericityFailure;
    for (double ph : phases) {
        auto torus = base;
        torus.phase = ph;
        tried.push_back(ph);
        try {
            auto run = run_euler_generic(torus, opts);
            run.phases_tried = tried;
            return run;
        } catch (const Error& e) {
            if (!retryable(e.code())) throw;
            last_code = e.code();
            last = e.what();
        }
    }
    throw Error(last_code, last + " (after " + std::to_string(tried.size()) + " phases)");
}

DistinguishedRun run_euler_distinguished(double mu, int k, int l, std::optional<double> c, OrbitKind kind,
                                         const RunOptions& opts) {
    if (kind == OrbitKind::Generic) throw Error(ErrorCode::InvalidInput, "distinguished run needs a distinguished kind");
    DistinguishedRun r;
    r.params = make_torus(mu, k, l, c, kind);
    if (kind != OrbitKind::CollisionCollision) r.quadruple_formula = quadruple_count_formula(k, l, kind);
    r.orbit = synthesize_orbit(r.params, opts.samples ? opts.samples : 2048);
    // the orbit retraces its reversal arc, so each double point of the arc
    // is met by four branches
    CrossingOptions co;
    co.strict = false;
    const auto cs = find_polyline_crossings(r.orbit.reversal_arc, co);
    r.clusters = cluster_multiple_points(cs, 1e-9 * r.orbit.curve.diameter(), 2);
    r.all_quadruple = std::all_of(r.clusters.begin(), r.clusters.end(),
                                  [](const MultiplePoint& m) { return m.multiplicity == 4; });
    if (r.quadruple_formula) r.predicted = distinguished_invariants(kind, static_cast<int>(r.clusters.size()));
    try {
        r.axis = axis_crossing_counts(r.orbit);
    } catch (const Error& e) {
        // thin tori hug the axis; their crossings are tangential to double precision
        const double lmax = turning_points(mu, torus_offsets(r.params.euler)).lambda_max;
        if (e.code() != ErrorCode::TangentialCrossing || lmax >= kMinLambdaMax) throw;
        std::ostringstream msg;
        msg << e.what() << " (lambda_max = " << lmax << " < " << kMinLambdaMax << ")";
        throw Error(ErrorCode::ResolutionLimit, msg.str());
    }
    r.cycles = cycle_counts(r.orbit);
    return r;
}

}  // namespace torusinv
