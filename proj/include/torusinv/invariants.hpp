#pragma once

#include <cstddef>
#include <vector>

#include "torusinv/crossings.hpp"
#include "torusinv/curve.hpp"
#include "torusinv/half_integer.hpp"

namespace torusinv {

// Throws NonImmersion if a turn between consecutive segments exceeds pi/2.
int turning_number(const ClosedCurve& curve);

// tol <= 0 selects 1e-12 times the curve diameter.
int winding_number(const ClosedCurve& curve, Vec2 point, double tol = 0.0);

// Planar arrangement of a closed curve with transverse double points.
// Half-edge 2k runs along the curve from event k to event k+1, 2k+1 is its twin.
struct FaceDecomposition {
    std::size_t n_vertices = 0;
    std::size_t n_edges = 0;
    std::vector<std::vector<std::size_t>> faces;  // half-edge cycles, face on the left
    std::vector<std::size_t> half_edge_face;
    std::vector<double> face_area;  // signed; the unbounded face is the only negative one
    std::vector<int> face_winding;
    std::vector<int> vertex_index;  // mean winding of the four corners
    std::size_t unbounded_face = 0;

    std::size_t n_faces() const { return faces.size(); }
    long euler_characteristic() const {
        return static_cast<long>(n_vertices) - static_cast<long>(n_edges) + static_cast<long>(faces.size());
    }
};

FaceDecomposition decompose_faces(const ClosedCurve& curve, const CrossingSet& crossings);

// J+ from an arrangement: 1 + n - sum_f w_f^2 + sum_v ind_v^2
int jplus_from_faces(const FaceDecomposition& faces);

struct GenericityReport {
    double min_crossing_angle;  // +inf when there are no crossings
    double min_param_gap;       // +inf when there are no crossings
    bool pass;
};

GenericityReport genericity_report(const ClosedCurve& curve, const CrossingSet& crossings,
                                   const GenericityThresholds& thr = {});

// Full pipeline: crossings, genericity gate, immersion check, arrangement.
// Throws NearTangency, NonImmersion or GenericityFailure.
int jplus(const ClosedCurve& curve, const GenericityThresholds& thr = {});

HalfInteger j1(const ClosedCurve& curve, Vec2 center, const GenericityThresholds& thr = {});

// Preimage under z -> z^2 after moving center to the origin. For odd winding
// the base curve is traversed twice and the result has period 2T.
// other_branch selects the second component when the winding is even.
ClosedCurve levi_civita_lift(const ClosedCurve& curve, Vec2 center, bool other_branch = false);

int j2(const ClosedCurve& curve, Vec2 center, const GenericityThresholds& thr = {});

struct MultiplePoint {
    Vec2 point;
    std::size_t pair_events = 0;
    int multiplicity = 0;
};

// Groups crossings lying within radius of each other (single linkage).
// m branches through a point give m(m-1)/2 pair events. branch_cover
// multiplies the recovered multiplicity, for polylines that trace each
// branch of the underlying curve once although it is covered several times.
std::vector<MultiplePoint> cluster_multiple_points(const CrossingSet& crossings, double radius,
                                                   int branch_cover = 1);

struct InvariantReport {
    int turning_number = 0;
    int w0 = 0;
    std::size_t n_double_points = 0;
    int jplus = 0;
    HalfInteger j1;
    int j2 = 0;
    double min_crossing_angle = 0.0;
    double min_param_gap = 0.0;
    std::size_t lift_double_points = 0;
    double lift_min_crossing_angle = 0.0;

    bool same_invariants(const InvariantReport& o) const {
        return turning_number == o.turning_number && w0 == o.w0 && n_double_points == o.n_double_points &&
               jplus == o.jplus && j1 == o.j1 && j2 == o.j2;
    }
};

InvariantReport compute_invariants(const ClosedCurve& curve, Vec2 center, const GenericityThresholds& thr = {});

}  // namespace torusinv
