#pragma once

#include <cstddef>

#include "torusinv/curve.hpp"

namespace torusinv {

ClosedCurve circle(Vec2 center, double radius, std::size_t n, bool counterclockwise = true);

// (sin t, sin t cos t): one node at the origin
ClosedCurve figure_eight(std::size_t n, double scale = 1.0);

// Whitney's standard curves: K_0 is the figure eight, K_j (j >= 1) is a
// circle with j - 1 small interior loops, realised as e^{it} + a e^{ijt}.
ClosedCurve standard_curve(int j, std::size_t n);

}  // namespace torusinv
