#pragma once

#include <cstddef>
#include <utility>

#include "torusinv/curve.hpp"
#include "torusinv/half_integer.hpp"

namespace torusinv {

// Newton iteration safeguarded by bisection on [M - e, M + e].
// Throws NonConvergence after max_iter steps.
double solve_kepler_equation(double mean_anomaly, double e, int max_iter = 100);

double rkp_energy(int k, int l);

// Sense of the Kepler motion. Positive angular momentum rotates with the
// frame; these members stay immersed for every eccentricity.
enum class KeplerSense { Positive, Negative };

struct RkpTorusParams {
    int k = 3;
    int l = 2;
    double eccentricity = 0.5;
    double phase = 0.0;  // argument of perihelion
    KeplerSense sense = KeplerSense::Positive;
};

// Throws InvalidResonance or InvalidInput.
void validate(const RkpTorusParams& p);

struct PhaseState {
    Vec2 q;
    Vec2 p;
};

// Rotating-frame state at time t: q = e^{it} gamma(t), p = e^{it} gamma'(t).
PhaseState rkp_state(const RkpTorusParams& params, double t);

// Both are rotation invariant, so they can be read off the rotating frame.
double kepler_energy(const PhaseState& s);            // |p|^2 / 2 - 1/|q|
double kepler_angular_momentum(const PhaseState& s);  // q x p
double rkp_hamiltonian(const PhaseState& s);          // E + L

// Closed trace of period 2 pi l, sampled uniformly in eccentric anomaly
// with samples_per_cycle points per ellipse revolution.
// Throws ClosureFailure if the end point misses the start by more than 1e-6 diameters.
ClosedCurve rkp_orbit(const RkpTorusParams& params, std::size_t samples_per_cycle = 4096);

struct InvariantPair {
    HalfInteger j1;
    int j2 = 0;
    friend bool operator==(const InvariantPair&, const InvariantPair&) = default;
};

InvariantPair rkp_invariants_formula(int k, int l);

struct FamilyEndpoint {
    int cover = 0;
    double angular_momentum = 0.0;
};

// birth at the (k - l)-fold covered circle, death at the (k + l)-fold one
std::pair<FamilyEndpoint, FamilyEndpoint> rkp_family_endpoints(int k, int l);

// gcd(k, l) = 1 and k > l > 0, else InvalidResonance
void require_resonance(int k, int l);

}  // namespace torusinv
