#pragma once

#include <string>
#include <vector>

#include "torusinv/curve.hpp"

namespace fixture {

// Circle with a dent pushed through the opposite side: one outward loop
// inside, two double points, turning number 1.
torusinv::ClosedCurve bean(std::size_t n = 2000);

struct Named {
    std::string name;
    torusinv::ClosedCurve curve;
};

// 20 curves for the crossing-detector comparison
std::vector<Named> corpus();

}  // namespace fixture
