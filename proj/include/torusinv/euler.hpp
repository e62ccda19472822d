#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "torusinv/curve.hpp"
#include "torusinv/half_integer.hpp"
#include "torusinv/kepler.hpp"

namespace torusinv {

// Frames: the separated problem uses centres at (-1/2, 0) (Earth, mass 1 - mu)
// and (1/2, 0) (Moon, mass mu). Curves and integrals use the Earth frame,
// Earth at (0, 0) and Moon at (1, 0).
inline constexpr Vec2 kEarthShift{0.5, 0.0};

// centred frame: (cosh l cos n, sinh l sin n) / 2
Vec2 elliptic_to_cartesian(double lambda, double nu);

struct EllipticState {
    double lambda = 0.0;
    double nu = 0.0;  // in [-pi, pi)
    double p_lambda = 0.0;
    double p_nu = 0.0;
};

struct CartesianState {
    Vec2 q;  // Earth frame
    Vec2 p;
};

// Throws CollisionPoint at the branch points, where the momentum map degenerates.
CartesianState to_cartesian(const EllipticState& s);

double k_lambda(const EllipticState& s, double c);            // 2 p^2 - 2 cosh - c cosh^2
double k_nu(const EllipticState& s, double c, double mu);     // 2 p^2 + 2(1-2mu) cos + c cos^2

struct EulerIntegrals {
    double H = 0.0;
    double B = 0.0;
    double G = 0.0;
};

// Earth frame. Throws CollisionPoint within tol of a primary.
EulerIntegrals euler_integrals(Vec2 q, Vec2 p, double mu, double tol = 1e-12);

double critical_energy(double mu);

enum class Region { S, SPrime, Boundary, Forbidden, Other };
std::string to_string(Region r);

Region classify_region(double g, double c, double mu, double tol = 1e-9);

struct TurningPoints {
    double lambda_max = 0.0;
    double x_plus = 1.0;   // cosh(lambda_max)
    double x_minus = 0.0;  // other root of c x^2 + 2x + g
    double y1 = -1.0;      // cos(nu) at the edge of the Earth window
    double y2 = 1.0;       // other root
    double sigma_max = 0.0;  // half-width of the window around nu = pi
};

// Throws NoLibration outside S and S'.
TurningPoints turning_points(double g, double c, double mu);

// Distances from the corner of S where the Earth tori degenerate:
// dc = c1 - c and dg = g - (-2 - c). Near the corner, where the high
// resonances live, c and g themselves no longer resolve the torus.
struct TorusOffsets {
    double dc = 0.0;
    double dg = 0.0;
};
TorusOffsets torus_offsets(double g, double c, double mu);

TurningPoints turning_points(double mu, TorusOffsets o);

struct SeparatedPeriods {
    double T_lambda = 0.0;
    double T_nu = 0.0;
};

SeparatedPeriods separated_periods(double g, double c, double mu);
SeparatedPeriods separated_periods(double mu, TorusOffsets o);
double rotation_number(double g, double c, double mu);
double rotation_number(double mu, TorusOffsets o);

// open interval of g where the Earth torus exists at energy c
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};
Interval admissible_g_interval(double c, double mu);

// R at the two ends of the admissible g-interval (degenerate tori)
Interval rotation_range(double c, double mu);
Interval rotation_range_at(double mu, double dc);

struct ResonanceRoot {
    double g = 0.0;
    double R = 0.0;
    double dg = 0.0;  // offset form of g
};

// All roots of R(g) = k/l at fixed c, bracketed on a 200-point scan.
// Throws ResonanceOutOfRange (reporting the attainable range) if there are none.
std::vector<ResonanceRoot> solve_resonance(double c, double mu, int k, int l);
std::vector<ResonanceRoot> solve_resonance_at(double mu, double dc, int k, int l);

// Energy interval below c1 on which k/l is attainable, and its midpoint
// (the default energy).
struct EnergyChoice {
    double c_lo = 0.0;
    double c_hi = 0.0;
    double c = 0.0;
    double dc = 0.0;  // c1 - c, exact
};
EnergyChoice default_energy(double mu, int k, int l);

enum class OrbitKind { Generic, BrakeBrake, BrakeCollision, CollisionCollision };
std::string to_string(OrbitKind k);
std::optional<OrbitKind> parse_orbit_kind(const std::string& s);

// Throws KindUnavailable when the parity of k + l excludes the kind.
void require_kind_available(int k, int l, OrbitKind kind);

struct EulerParams {
    double mu = 0.25;
    double c = -2.2;
    double g = 1.0;
    Region region = Region::S;
    // offsets carried alongside c and g when they were solved for;
    // NaN means derive them from c and g
    double dc = std::numeric_limits<double>::quiet_NaN();
    double dg = std::numeric_limits<double>::quiet_NaN();
};
TorusOffsets torus_offsets(const EulerParams& e);

struct EulerTorusParams {
    int k = 4;
    int l = 3;
    EulerParams euler;
    OrbitKind kind = OrbitKind::Generic;
    double phase = 0.25;   // generic offset, in units of T/(2kl) from the brake-brake class
    bool mirror = false;   // reflected member for collision kinds
};

// Solves the resonance at energy c (default_energy when absent), picks the
// first root and validates the kind.
EulerTorusParams make_torus(double mu, int k, int l, std::optional<double> c = std::nullopt,
                            OrbitKind kind = OrbitKind::Generic, double phase = 0.25);

struct EulerOrbit {
    EulerTorusParams params;
    double T_lambda = 0.0;
    double T_nu = 0.0;
    double T = 0.0;              // k T_lambda = l T_nu
    int traversals = 1;          // the curve covers T / traversals
    ClosedCurve curve;           // Earth frame, regularised time parameter
    std::vector<EllipticState> states;  // one per curve sample
    std::vector<Vec2> momenta;          // Earth frame, one per curve sample (NaN at a collision)
    // distinguished kinds: the path between the two reversal points,
    // retraced by the orbit, with both endpoints included
    std::vector<Vec2> reversal_arc;
    double closure_error = 0.0;  // relative to the diameter
};

EulerOrbit synthesize_orbit(const EulerTorusParams& params, std::size_t samples_per_lambda_cycle = 2048);

// Largest deviation of the separated energies and of (H, G) from (c, g)
// along the orbit, relative to max(1, |value|). Samples near collisions skipped.
struct ConservationDrift {
    double k_lambda = 0.0;
    double k_nu = 0.0;
    double H = 0.0;
    double G = 0.0;
    double max() const;
};
ConservationDrift conservation_drift(const EulerOrbit& orbit);

struct AxisCounts {
    int positive = 0;  // ray from the Earth towards the Moon
    int negative = 0;
};

// Crossings of the q1-axis rays through the Earth over the full period T.
// A collision counts once on each ray. Throws TangentialCrossing.
AxisCounts axis_crossing_counts(const EulerOrbit& orbit);

// Zero crossings of lambda and of nu - pi over the full period, halved.
AxisCounts cycle_counts(const EulerOrbit& orbit);

int quadruple_count_formula(int k, int l, OrbitKind kind);
InvariantPair euler_invariants_formula(int k, int l);

struct DistinguishedInvariants {
    HalfInteger j1;
    std::optional<int> j2;
};
DistinguishedInvariants distinguished_invariants(OrbitKind kind, int N);

// -(1-mu)/|q| - mu/|q - M| in the Earth frame; its level set at c bounds the Hill region
double euler_potential(Vec2 q, double mu);

}  // namespace torusinv
