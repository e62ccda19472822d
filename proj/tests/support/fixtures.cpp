#include "support/fixtures.hpp"

#include <cmath>
#include <numbers>

#include "torusinv/euler.hpp"
#include "torusinv/kepler.hpp"
#include "torusinv/standard_curves.hpp"

namespace fixture {

using torusinv::ClosedCurve;
using torusinv::Vec2;
constexpr double kPi = std::numbers::pi;

ClosedCurve bean(std::size_t n) {
    return ClosedCurve::sample(
        [](double t) {
            const double u = t - kPi;  // dent centred on the left side
            return Vec2{std::cos(u) - 2.5 * std::exp(-u * u / 0.09), std::sin(u)};
        },
        2 * kPi, n);
}

std::vector<Named> corpus() {
    std::vector<Named> out;
    for (int j = 0; j <= 5; ++j) out.push_back({"K" + std::to_string(j), torusinv::standard_curve(j, 800)});
    out.push_back({"circle", torusinv::circle({0.3, -0.2}, 2.0, 300)});
    // an even sample count puts the node on a shared vertex
    out.push_back({"figure eight", torusinv::figure_eight(400)});
    out.push_back({"bean", bean(700)});
    auto epi = [](double R, double r, double d, int turns, std::size_t n) {
        return ClosedCurve::sample(
            [=](double t) {
                return Vec2{(R + r) * std::cos(t) - d * std::cos((R + r) / r * t),
                            (R + r) * std::sin(t) - d * std::sin((R + r) / r * t)};
            },
            2 * kPi * turns, n);
    };
    out.push_back({"epitrochoid 3", epi(3.0, 1.0, 2.0, 1, 900)});
    out.push_back({"epitrochoid 5/2", epi(5.0, 2.0, 3.0, 2, 1500)});
    out.push_back({"limacon", ClosedCurve::sample(
                                  [](double t) {
                                      const double r = 0.5 + std::cos(t);
                                      return Vec2{r * std::cos(t), r * std::sin(t)};
                                  },
                                  2 * kPi, 500)});
    out.push_back({"trefoil", ClosedCurve::sample(
                                  [](double t) {
                                      return Vec2{std::sin(t) + 2 * std::sin(2 * t), std::cos(t) - 2 * std::cos(2 * t)};
                                  },
                                  2 * kPi, 600)});
    auto lissajous = [](int a, int b, double phase, std::size_t n) {
        return ClosedCurve::sample([=](double t) { return Vec2{std::sin(a * t + phase), std::sin(b * t)}; }, 2 * kPi,
                                   n);
    };
    out.push_back({"lissajous 3:2", lissajous(3, 2, 0.3, 1200)});
    out.push_back({"lissajous 5:4", lissajous(5, 4, 0.7, 2000)});
    for (auto [k, l] : {std::pair{3, 2}, std::pair{5, 1}}) {
        torusinv::RkpTorusParams p;
        p.k = k;
        p.l = l;
        p.eccentricity = 0.5;
        out.push_back({"rkp " + std::to_string(k) + "," + std::to_string(l), torusinv::rkp_orbit(p, 512)});
    }
    for (auto [k, l] : {std::pair{4, 3}, std::pair{5, 2}}) {
        const auto t = torusinv::make_torus(0.25, k, l);
        out.push_back({"euler " + std::to_string(k) + "," + std::to_string(l), torusinv::synthesize_orbit(t, 256).curve});
    }
    out.push_back({"hypotrochoid", ClosedCurve::sample(
                                       [](double t) {
                                           return Vec2{2 * std::cos(t) + 1.7 * std::cos(2 * t / 3.0 * 5.0),
                                                       2 * std::sin(t) - 1.7 * std::sin(2 * t / 3.0 * 5.0)};
                                       },
                                       6 * kPi, 1800)});
    return out;
}

}  // namespace fixture
