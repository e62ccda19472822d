#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "torusinv/geometry.hpp"

namespace torusinv {

// Sampled closed planar curve. The polyline is cyclic: the last sample
// connects back to the first.
class ClosedCurve {
public:
    ClosedCurve() = default;
    // Throws InvalidInput (bad parameters) or DegenerateSegment (repeated point).
    ClosedCurve(std::vector<double> params, std::vector<Vec2> points, double period);

    // Samples f at n equally spaced parameters in [0, period).
    static ClosedCurve sample(const std::function<Vec2(double)>& f, double period, std::size_t n);

    std::size_t size() const { return points_.size(); }
    double period() const { return period_; }
    const std::vector<Vec2>& points() const { return points_; }
    const std::vector<double>& params() const { return params_; }
    Vec2 point(std::size_t i) const { return points_[i]; }
    double param(std::size_t i) const { return params_[i]; }
    // parameter at the end of segment i (wraps to period for the closing segment)
    double param_end(std::size_t i) const { return i + 1 < size() ? params_[i + 1] : period_; }

    double diameter() const;  // bounding-box diagonal
    Vec2 centroid() const;

    ClosedCurve reversed() const;
    // q -> scale * R(angle) q + shift, parameters unchanged
    ClosedCurve transformed(double scale, double angle, Vec2 shift) const;
    ClosedCurve translated(Vec2 shift) const { return transformed(1.0, 0.0, shift); }

private:
    std::vector<double> params_;
    std::vector<Vec2> points_;
    double period_ = 0.0;
};

// Curve CSV: one "t,q1,q2" per line; '#' starts a comment line.
ClosedCurve read_curve_csv(std::istream& in, double period = 0.0);
ClosedCurve read_curve_csv_file(const std::string& path, double period = 0.0);
void write_curve_csv(std::ostream& out, const ClosedCurve& curve, const std::string& comment = {});
void write_curve_csv_file(const std::string& path, const ClosedCurve& curve, const std::string& comment = {});

}  // namespace torusinv
