#include "torusinv/curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "torusinv/errors.hpp"

namespace torusinv {

ClosedCurve::ClosedCurve(std::vector<double> params, std::vector<Vec2> points, double period)
    : params_(std::move(params)), points_(std::move(points)), period_(period) {
    const std::size_t n = points_.size();
    if (n < 3) throw Error(ErrorCode::InvalidInput, "closed curve needs at least 3 samples");
    if (params_.size() != n) throw Error(ErrorCode::InvalidInput, "parameter/point count mismatch");
    if (!(period_ > 0.0) || !std::isfinite(period_))
        throw Error(ErrorCode::InvalidInput, "curve period must be positive");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y) || !std::isfinite(params_[i]))
            throw Error(ErrorCode::InvalidInput, "non-finite sample " + std::to_string(i));
        if (i > 0 && !(params_[i] > params_[i - 1]))
            throw Error(ErrorCode::InvalidInput, "parameters not strictly increasing at " + std::to_string(i));
    }
    if (params_.back() - params_.front() >= period_)
        throw Error(ErrorCode::InvalidInput, "parameter span exceeds period");
    for (std::size_t i = 0; i < n; ++i) {
        if (points_[i] == points_[(i + 1) % n])
            throw Error(ErrorCode::DegenerateSegment, "zero-length segment at sample " + std::to_string(i));
    }
}

ClosedCurve ClosedCurve::sample(const std::function<Vec2(double)>& f, double period, std::size_t n) {
    std::vector<double> t(n);
    std::vector<Vec2> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = period * static_cast<double>(i) / static_cast<double>(n);
        q[i] = f(t[i]);
    }
    return ClosedCurve(std::move(t), std::move(q), period);
}

double ClosedCurve::diameter() const {
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
    for (auto p : points_) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    return std::hypot(x1 - x0, y1 - y0);
}

Vec2 ClosedCurve::centroid() const {
    Vec2 c;
    for (auto p : points_) c = c + p;
    return (1.0 / static_cast<double>(points_.size())) * c;
}

ClosedCurve ClosedCurve::reversed() const {
    // t -> T - t keeps the first sample in place
    const std::size_t n = size();
    std::vector<double> t(n);
    std::vector<Vec2> q(n);
    t[0] = 0.0;
    q[0] = points_[0];
    for (std::size_t i = 1; i < n; ++i) {
        t[i] = period_ - (params_[n - i] - params_[0]);
        q[i] = points_[n - i];
    }
    return ClosedCurve(std::move(t), std::move(q), period_);
}

ClosedCurve ClosedCurve::transformed(double scale, double angle, Vec2 shift) const {
    const Vec2 rot{std::cos(angle), std::sin(angle)};
    std::vector<Vec2> q(points_.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = scale * cmul(rot, points_[i]) + shift;
    return ClosedCurve(params_, std::move(q), period_);
}

ClosedCurve read_curve_csv(std::istream& in, double period) {
    std::vector<double> t;
    std::vector<Vec2> q;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            std::istringstream ss(line.substr(first + 1));
            std::string key;
            double value;
            if (period <= 0.0 && ss >> key >> value && key == "period") period = value;
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a, b, c;
        if (!(ss >> a >> b >> c))
            throw Error(ErrorCode::InvalidInput, "malformed curve line " + std::to_string(lineno));
        t.push_back(a);
        q.push_back({b, c});
    }
    if (t.size() < 3) throw Error(ErrorCode::InvalidInput, "curve file has fewer than 3 samples");
    if (period <= 0.0) {
        // closure implicit: assume the gap after the last sample equals the mean step
        period = (t.back() - t.front()) * static_cast<double>(t.size()) / static_cast<double>(t.size() - 1);
    }
    const double t0 = t.front();
    for (auto& v : t) v -= t0;
    return ClosedCurve(std::move(t), std::move(q), period);
}

ClosedCurve read_curve_csv_file(const std::string& path, double period) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open curve file " + path);
    return read_curve_csv(in, period);
}

void write_curve_csv(std::ostream& out, const ClosedCurve& curve, const std::string& comment) {
    std::istringstream lines(comment);
    for (std::string l; std::getline(lines, l);) out << "# " << l << '\n';
    out << "# period " << std::setprecision(17) << curve.period() << '\n';
    out << "# t,q1,q2\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto p = curve.point(i);
        out << curve.param(i) << ',' << p.x << ',' << p.y << '\n';
    }
}

void write_curve_csv_file(const std::string& path, const ClosedCurve& curve, const std::string& comment) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write curve file " + path);
    write_curve_csv(out, curve, comment);
}

}  // namespace torusinv
