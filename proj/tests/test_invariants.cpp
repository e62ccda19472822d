#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "support/fixtures.hpp"
#include "torusinv/errors.hpp"
#include "torusinv/euler.hpp"
#include "torusinv/invariants.hpp"
#include "torusinv/kepler.hpp"
#include "torusinv/standard_curves.hpp"

using namespace torusinv;
constexpr double kPi = std::numbers::pi;

namespace {

double shoelace(const ClosedCurve& c) {
    double a = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) a += cross(c.point(i), c.point((i + 1) % c.size()));
    return a / 2;
}

// square root lift by continuity, written without the library helper
ClosedCurve sqrt_lift(const ClosedCurve& c, Vec2 center) {
    const std::size_t n = c.size();
    const int laps = winding_number(c, center) % 2 == 0 ? 1 : 2;
    std::vector<double> t;
    std::vector<Vec2> pts;
    std::complex<double> prev;
    for (int lap = 0; lap < laps; ++lap) {
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 d = c.point(i) - center;
            std::complex<double> r = std::sqrt(std::complex<double>(d.x, d.y));
            if (!pts.empty() && std::abs(r - prev) > std::abs(-r - prev)) r = -r;
            prev = r;
            t.push_back(c.param(i) + lap * c.period());
            pts.push_back({r.real(), r.imag()});
        }
    }
    return ClosedCurve(t, pts, laps * c.period());
}

}  // namespace

TEST_CASE("standard curves calibrate J+ = 2 - 2j") {
    const int expected[] = {0, 0, -2, -4, -6, -8};
    for (int j = 0; j <= 5; ++j) {
        CAPTURE(j);
        const auto k = standard_curve(j, 1200);
        CHECK(jplus(k) == expected[j]);
        CHECK(turning_number(k) == j);
        CHECK(find_crossings(k).size() == static_cast<std::size_t>(j == 0 ? 1 : j - 1));
    }
}

TEST_CASE("small curves") {
    CHECK(jplus(circle({0, 0}, 1, 100)) == 0);
    CHECK(jplus(figure_eight(301)) == 0);
    const auto b = fixture::bean();
    CHECK(turning_number(b) == 1);
    CHECK(find_crossings(b).size() == 2);
    CHECK(jplus(b) == 0);
}

TEST_CASE("winding number and point on curve") {
    const auto c = circle({0, 0}, 1, 64);
    CHECK(winding_number(c, {0.1, 0.2}) == 1);
    CHECK(winding_number(c, {3, 0}) == 0);
    CHECK(winding_number(c.reversed(), {0, 0}) == -1);
    try {
        winding_number(c, c.point(5));
        FAIL("expected PointOnCurve");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PointOnCurve);
    }
}

TEST_CASE("cusp-like turn is not an immersion") {
    const ClosedCurve spike({0, 1, 2, 3}, {{0, 0}, {1, 0}, {-1, 0.01}, {0, 1}}, 4);
    try {
        turning_number(spike);
        FAIL("expected NonImmersion");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonImmersion);
    }
}

TEST_CASE("arrangement of the corpus") {
    for (const auto& [name, curve] : fixture::corpus()) {
        CAPTURE(name);
        CrossingOptions lax;
        lax.strict = false;
        const auto cs = find_crossings(curve, lax);
        const auto fd = decompose_faces(curve, cs);
        const std::size_t n = cs.size();
        // connected 4-valent plane graph: V - E + F = 2
        if (n > 0) {
            CHECK(fd.n_vertices == n);
            CHECK(fd.n_edges == 2 * n);
            CHECK(fd.n_faces() == n + 2);
            CHECK(fd.euler_characteristic() == 2);
        }
        CHECK(fd.face_winding[fd.unbounded_face] == 0);
        // sum of w_f area_f is the signed area enclosed by the polyline
        double a = 0.0;
        for (std::size_t f = 0; f < fd.n_faces(); ++f)
            if (f != fd.unbounded_face) a += fd.face_winding[f] * fd.face_area[f];
        CHECK(a == doctest::Approx(shoelace(curve)).epsilon(1e-9));
        // adjacent faces across an edge differ in winding by one
        for (std::size_t h = 0; h < fd.half_edge_face.size(); h += 2)
            CHECK(std::abs(fd.face_winding[fd.half_edge_face[h]] - fd.face_winding[fd.half_edge_face[h + 1]]) == 1);
    }
}

TEST_CASE("J+ is invariant under similarity, orientation, start point and resolution") {
    auto epi = [](std::size_t n, double phase) {
        return ClosedCurve::sample(
            [=](double t) {
                t += phase;
                return Vec2{3 * std::cos(t) - 2 * std::cos(3 * t), 3 * std::sin(t) - 2 * std::sin(3 * t)};
            },
            2 * kPi, n);
    };
    const auto base = epi(900, 0.0);
    const int J = jplus(base);
    CHECK(jplus(base.transformed(0.01, 1.3, {5, 7})) == J);
    CHECK(jplus(base.transformed(1e4, -2.0, {-3, 1})) == J);
    CHECK(jplus(base.reversed()) == J);
    CHECK(jplus(epi(900, 0.37)) == J);
    CHECK(jplus(epi(1800, 0.0)) == J);
}

TEST_CASE("levi-civita lift matches a direct square root") {
    const std::vector<std::pair<ClosedCurve, Vec2>> cases{
        {circle({0, 0}, 1, 300), {0, 0}},
        {circle({0.5, 0}, 1, 300), {0, 0}},
        {standard_curve(3, 900), {0, 0}},
        {fixture::bean(), {0.4, 0}},
    };
    for (const auto& [c, center] : cases) {
        const auto a = levi_civita_lift(c, center);
        const auto b = sqrt_lift(c, center);
        CHECK(a.size() == b.size());
        CHECK(jplus(a) == jplus(b));
        CHECK(j2(c, center) == jplus(b));
    }
    // lift of a circle about its centre is a circle: J2 = 0, J1 = 1/2
    const auto c = circle({0, 0}, 1, 300);
    CHECK(j1(c, {0, 0}) == HalfInteger::from_twice(1));
    CHECK(j2(c, {0, 0}) == 0);
    // centre outside: two disjoint lifts, w0 = 0
    CHECK(j1(c, {3, 0}) == HalfInteger::from_int(0));
    CHECK(j2(c, {3, 0}) == 0);
}

TEST_CASE("J2 = 2 J1 - 1 whenever w0 is odd") {
    int odd = 0;
    auto check = [&](const ClosedCurve& c, Vec2 center) {
        const auto r = compute_invariants(c, center, {1e-4, 1e-5});
        if (r.w0 % 2 == 0) return;
        ++odd;
        CHECK(HalfInteger::from_int(r.j2) == 2 * r.j1 - HalfInteger::from_int(1));
    };
    for (int j = 1; j <= 5; ++j) check(standard_curve(j, 1200), {0, 0});
    check(fixture::bean(), {0.5, 0});
    for (auto [k, l] : {std::pair{3, 2}, {4, 1}, {5, 2}, {7, 4}, {8, 3}}) {
        RkpTorusParams p;
        p.k = k;
        p.l = l;
        check(rkp_orbit(p, 2048), {0, 0});
    }
    CHECK(odd >= 8);
}

TEST_CASE("multiple point clustering") {
    // three lines through one point give three pair events: a triple point
    Crossing c;
    CrossingSet cs;
    for (int i = 0; i < 3; ++i) {
        c.point = {1e-12 * i, 0};
        cs.push_back(c);
    }
    c.point = {1, 1};
    cs.push_back(c);
    const auto m = cluster_multiple_points(cs, 1e-9);
    REQUIRE(m.size() == 2);
    CHECK(m[0].multiplicity + m[1].multiplicity == 5);
    // two pair events cannot come from any number of branches
    CrossingSet two(2, c);
    try {
        cluster_multiple_points(two, 1e-9);
        FAIL("expected AmbiguousClustering");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AmbiguousClustering);
    }
    // a polyline that covers each branch once, curve covers it twice
    CrossingSet one{c};
    CHECK(cluster_multiple_points(one, 1e-9, 2).front().multiplicity == 4);
}

TEST_CASE("euler (3,2) generic orbit") {
    const auto t = make_torus(0.25, 3, 2);
    const auto o = synthesize_orbit(t, 2048);
    const auto r = compute_invariants(o.curve, {0, 0}, {1e-5, 1e-4});
    CHECK(r.jplus == 8);
    CHECK(r.w0 == 0);
    CHECK(r.j1 == HalfInteger::from_int(8));
    CHECK(r.j2 == 2);
}
