#include "torusinv/kepler.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "torusinv/errors.hpp"

namespace torusinv {

namespace {

constexpr double kPi = std::numbers::pi;

struct Ellipse {
    double a, b, e, n, omega, sense;

    explicit Ellipse(const RkpTorusParams& p)
        : a(std::cbrt(static_cast<double>(p.l * p.l) / (p.k * p.k))),
          b(a * std::sqrt(1 - p.eccentricity * p.eccentricity)),
          e(p.eccentricity),
          n(static_cast<double>(p.k) / p.l),
          omega(p.phase),
          sense(p.sense == KeplerSense::Positive ? 1.0 : -1.0) {}

    Vec2 position(double ea) const {
        return rotate({a * (std::cos(ea) - e), sense * b * std::sin(ea)}, omega);
    }
    Vec2 velocity(double ea) const {
        const double rate = n / (1 - e * std::cos(ea));
        return rotate({-a * std::sin(ea) * rate, sense * b * std::cos(ea) * rate}, omega);
    }
    double time(double ea) const { return (ea - e * std::sin(ea)) / n; }
};

}  // namespace

double solve_kepler_equation(double M, double e, int max_iter) {
    if (!(e >= 0.0 && e < 1.0)) throw Error(ErrorCode::InvalidInput, "eccentricity must lie in [0, 1)");
    double lo = M - e, hi = M + e;
    double E = M + e * std::sin(M);
    for (int it = 0; it < max_iter; ++it) {
        const double f = E - e * std::sin(E) - M;
        if (std::abs(f) <= 1e-14 * std::max(1.0, std::abs(M))) return E;
        if (f > 0)
            hi = E;
        else
            lo = E;
        double next = E - f / (1 - e * std::cos(E));
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(M))) return next;
        E = next;
    }
    throw Error(ErrorCode::NonConvergence, "Kepler equation did not converge");
}

double rkp_energy(int k, int l) { return -0.5 * std::cbrt(static_cast<double>(k * k) / (l * l)); }

void require_resonance(int k, int l) {
    if (k <= 0 || l <= 0) throw Error(ErrorCode::InvalidResonance, "k and l must be positive");
    if (k <= l)
        throw Error(ErrorCode::InvalidResonance,
                    "resonance requires k > l (got k=" + std::to_string(k) + ", l=" + std::to_string(l) + ")");
    if (std::gcd(k, l) != 1)
        throw Error(ErrorCode::InvalidResonance,
                    "k and l must be coprime (gcd=" + std::to_string(std::gcd(k, l)) + ")");
}

void validate(const RkpTorusParams& p) {
    require_resonance(p.k, p.l);
    if (!(p.eccentricity > 0.0 && p.eccentricity < 1.0))
        throw Error(ErrorCode::InvalidInput, "eccentricity must lie in (0, 1)");
    if (!std::isfinite(p.phase)) throw Error(ErrorCode::InvalidInput, "phase must be finite");
}

PhaseState rkp_state(const RkpTorusParams& params, double t) {
    validate(params);
    const Ellipse el(params);
    const double ea = solve_kepler_equation(el.n * t, el.e);
    return {rotate(el.position(ea), t), rotate(el.velocity(ea), t)};
}

double kepler_energy(const PhaseState& s) { return 0.5 * dot(s.p, s.p) - 1.0 / norm(s.q); }
double kepler_angular_momentum(const PhaseState& s) { return cross(s.q, s.p); }
double rkp_hamiltonian(const PhaseState& s) { return kepler_energy(s) + kepler_angular_momentum(s); }

ClosedCurve rkp_orbit(const RkpTorusParams& params, std::size_t samples_per_cycle) {
    validate(params);
    if (samples_per_cycle < 16) throw Error(ErrorCode::InvalidInput, "too few samples per cycle");
    const Ellipse el(params);
    const std::size_t total = samples_per_cycle * static_cast<std::size_t>(params.k);
    std::vector<double> t(total);
    std::vector<Vec2> q(total);
    for (std::size_t i = 0; i < total; ++i) {
        const double ea = 2 * kPi * static_cast<double>(i) / static_cast<double>(samples_per_cycle);
        t[i] = el.time(ea);
        q[i] = rotate(el.position(ea), t[i]);
    }
    const double period = 2 * kPi * params.l;
    const double ea_end = 2 * kPi * params.k;
    const Vec2 end = rotate(el.position(ea_end), el.time(ea_end));
    ClosedCurve curve(std::move(t), std::move(q), period);
    const double gap = dist(end, curve.point(0));
    if (gap > 1e-6 * curve.diameter()) {
        std::ostringstream msg;
        msg << "orbit does not close: end point misses start by " << gap;
        throw Error(ErrorCode::ClosureFailure, msg.str());
    }
    return curve;
}

InvariantPair rkp_invariants_formula(int k, int l) {
    require_resonance(k, l);
    const std::int64_t K = k, L = l;
    InvariantPair r;
    r.j1 = HalfInteger::from_twice(2 - 2 * K + K * K - L * L);
    r.j2 = static_cast<int>((K + L) % 2 == 1 ? (K - 1) * (K - 1) - L * L : 1 - K + (K * K - L * L) / 4);
    return r;
}

std::pair<FamilyEndpoint, FamilyEndpoint> rkp_family_endpoints(int k, int l) {
    require_resonance(k, l);
    const double L = std::cbrt(static_cast<double>(l) / k);
    return {{k - l, -L}, {k + l, L}};
}

}  // namespace torusinv
