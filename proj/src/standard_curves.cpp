#include "torusinv/standard_curves.hpp"

#include <cmath>
#include <numbers>

#include "torusinv/errors.hpp"

namespace torusinv {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

ClosedCurve circle(Vec2 center, double radius, std::size_t n, bool counterclockwise) {
    const double s = counterclockwise ? 1.0 : -1.0;
    return ClosedCurve::sample(
        [=](double t) { return center + Vec2{radius * std::cos(t), s * radius * std::sin(t)}; }, kTwoPi, n);
}

ClosedCurve figure_eight(std::size_t n, double scale) {
    return ClosedCurve::sample([=](double t) { return scale * Vec2{std::sin(t), std::sin(t) * std::cos(t)}; },
                               kTwoPi, n);
}

ClosedCurve standard_curve(int j, std::size_t n) {
    if (j < 0) throw Error(ErrorCode::InvalidInput, "standard curve index must be nonnegative");
    if (j == 0) return figure_eight(n);
    if (j == 1) return circle({0, 0}, 1.0, n);
    // loops appear once j*a > 1; a = 1.6/j keeps them small and disjoint
    const double a = 1.6 / j;
    return ClosedCurve::sample(
        [=](double t) {
            return Vec2{std::cos(t) + a * std::cos(j * t), std::sin(t) + a * std::sin(j * t)};
        },
        kTwoPi, n);
}

}  // namespace torusinv
