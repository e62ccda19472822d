#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "torusinv/curve.hpp"

namespace torusinv {

struct Crossing {
    std::size_t seg_a = 0;  // seg_a < seg_b
    std::size_t seg_b = 0;
    double frac_a = 0.0;  // position along each segment in [0, 1]
    double frac_b = 0.0;
    double param_a = 0.0;
    double param_b = 0.0;
    Vec2 point;
    double angle = 0.0;  // unsigned angle between branch tangents, in [0, pi]
};

using CrossingSet = std::vector<Crossing>;

struct GenericityThresholds {
    double min_angle = 1e-3;           // radians, applied to angle and pi - angle
    double min_param_gap_fraction = 1e-4;  // times the period
};

struct CrossingOptions {
    double min_angle = 1e-3;
    // strict: throw NearTangency; otherwise report the crossing and let the caller judge
    bool strict = true;
};

// Grid-accelerated detection on the cyclic polyline. Each transverse
// intersection of non-adjacent segments is reported once, sorted by (seg_a, seg_b).
CrossingSet find_crossings(const ClosedCurve& curve, const CrossingOptions& opts = {});

// Same on an open polyline (no closing segment). Parameters are sample indices.
CrossingSet find_polyline_crossings(std::span<const Vec2> points, const CrossingOptions& opts = {});

// Segment intersection predicate shared with the reference implementation in
// the tests. Zero orientations count as positive so that a crossing through a
// shared vertex is attributed to exactly one segment pair.
bool segments_intersect(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1, double& s, double& t);

}  // namespace torusinv
