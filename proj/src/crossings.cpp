#include "torusinv/crossings.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

#include "torusinv/errors.hpp"

namespace torusinv {

namespace {

inline bool positive(double o) { return o >= 0.0; }

inline double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

struct Grid {
    double x0 = 0, y0 = 0, h = 1;
    std::int64_t nx = 1, ny = 1;
    std::vector<std::uint32_t> start;  // CSR offsets, size nx*ny+1
    std::vector<std::uint32_t> items;

    std::int64_t ix(double x) const {
        return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((x - x0) / h)), 0, nx - 1);
    }
    std::int64_t iy(double y) const {
        return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((y - y0) / h)), 0, ny - 1);
    }
};

struct CellRange {
    std::int64_t ix0, ix1, iy0, iy1;
};

CrossingSet detect(std::span<const Vec2> pts, const std::vector<double>* params, double period, bool closed,
                   const CrossingOptions& opts) {
    const std::size_t n = pts.size();
    const std::size_t nseg = closed ? n : (n > 0 ? n - 1 : 0);
    CrossingSet out;
    if (nseg < 3) return out;

    auto seg_end = [&](std::size_t i) { return pts[(i + 1) % n]; };
    std::vector<double> lengths(nseg);
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
    for (std::size_t i = 0; i < nseg; ++i) {
        lengths[i] = dist(pts[i], seg_end(i));
        if (lengths[i] == 0.0)
            throw Error(ErrorCode::DegenerateSegment, "zero-length segment at sample " + std::to_string(i));
    }
    for (std::size_t i = 0; i < n; ++i) {
        x0 = std::min(x0, pts[i].x);
        x1 = std::max(x1, pts[i].x);
        y0 = std::min(y0, pts[i].y);
        y1 = std::max(y1, pts[i].y);
    }
    std::vector<double> sorted = lengths;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(nseg / 2), sorted.end());
    const double median = sorted[nseg / 2];

    Grid g;
    g.x0 = x0;
    g.y0 = y0;
    const double w = std::max(x1 - x0, median), hgt = std::max(y1 - y0, median);
    g.h = std::max({2.0 * median, std::sqrt(w * hgt / (4.0 * static_cast<double>(nseg))), 1e-300});
    g.nx = static_cast<std::int64_t>(w / g.h) + 1;
    g.ny = static_cast<std::int64_t>(hgt / g.h) + 1;

    std::vector<CellRange> ranges(nseg);
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(g.nx * g.ny) + 1, 0);
    for (std::size_t i = 0; i < nseg; ++i) {
        const Vec2 a = pts[i], b = seg_end(i);
        CellRange r{g.ix(std::min(a.x, b.x)), g.ix(std::max(a.x, b.x)), g.iy(std::min(a.y, b.y)),
                    g.iy(std::max(a.y, b.y))};
        ranges[i] = r;
        for (auto cy = r.iy0; cy <= r.iy1; ++cy)
            for (auto cx = r.ix0; cx <= r.ix1; ++cx) ++counts[static_cast<std::size_t>(cy * g.nx + cx) + 1];
    }
    for (std::size_t c = 1; c < counts.size(); ++c) counts[c] += counts[c - 1];
    g.start = counts;
    g.items.resize(g.start.back());
    std::vector<std::uint32_t> fill(g.start.begin(), g.start.end() - 1);
    for (std::size_t i = 0; i < nseg; ++i) {
        const auto& r = ranges[i];
        for (auto cy = r.iy0; cy <= r.iy1; ++cy)
            for (auto cx = r.ix0; cx <= r.ix1; ++cx)
                g.items[fill[static_cast<std::size_t>(cy * g.nx + cx)]++] = static_cast<std::uint32_t>(i);
    }

    auto adjacent = [&](std::size_t i, std::size_t j) {
        if (j == i + 1) return true;
        return closed && i == 0 && j == nseg - 1;
    };
    auto param_of = [&](std::size_t i, double f) {
        if (!params) return static_cast<double>(i) + f;
        const double ta = (*params)[i];
        const double tb = i + 1 < n ? (*params)[i + 1] : period;
        return ta + f * (tb - ta);
    };

    for (std::int64_t cy = 0; cy < g.ny; ++cy) {
        for (std::int64_t cx = 0; cx < g.nx; ++cx) {
            const auto cell = static_cast<std::size_t>(cy * g.nx + cx);
            const auto b = g.start[cell], e = g.start[cell + 1];
            for (auto u = b; u < e; ++u) {
                for (auto v = u + 1; v < e; ++v) {
                    std::size_t i = g.items[u], j = g.items[v];
                    if (i > j) std::swap(i, j);
                    if (adjacent(i, j)) continue;
                    double s, t;
                    if (!segments_intersect(pts[i], seg_end(i), pts[j], seg_end(j), s, t)) continue;
                    const Vec2 da = seg_end(i) - pts[i], db = seg_end(j) - pts[j];
                    const Vec2 p = pts[i] + s * da;
                    const auto& ri = ranges[i];
                    const auto& rj = ranges[j];
                    const auto px = std::clamp(g.ix(p.x), std::max(ri.ix0, rj.ix0), std::min(ri.ix1, rj.ix1));
                    const auto py = std::clamp(g.iy(p.y), std::max(ri.iy0, rj.iy0), std::min(ri.iy1, rj.iy1));
                    if (px != cx || py != cy) continue;
                    Crossing c;
                    c.seg_a = i;
                    c.seg_b = j;
                    c.frac_a = s;
                    c.frac_b = t;
                    c.param_a = param_of(i, s);
                    c.param_b = param_of(j, t);
                    c.point = p;
                    c.angle = std::atan2(std::abs(cross(da, db)), dot(da, db));
                    out.push_back(c);
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) {
        return a.seg_a != b.seg_a ? a.seg_a < b.seg_a : a.seg_b < b.seg_b;
    });
    if (opts.strict) {
        for (const auto& c : out) {
            if (c.angle < opts.min_angle || c.angle > std::numbers::pi - opts.min_angle) {
                std::ostringstream msg;
                msg << "crossing of segments " << c.seg_a << " and " << c.seg_b << " at (" << c.point.x << ", "
                    << c.point.y << ") has angle " << c.angle << " rad";
                throw Error(ErrorCode::NearTangency, msg.str());
            }
        }
    }
    return out;
}

}  // namespace

bool segments_intersect(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1, double& s, double& t) {
    const double o1 = orient(q0, q1, p0), o2 = orient(q0, q1, p1);
    if (positive(o1) == positive(o2)) return false;
    const double o3 = orient(p0, p1, q0), o4 = orient(p0, p1, q1);
    if (positive(o3) == positive(o4)) return false;
    s = o1 / (o1 - o2);
    t = o3 / (o3 - o4);
    return true;
}

CrossingSet find_crossings(const ClosedCurve& curve, const CrossingOptions& opts) {
    return detect(curve.points(), &curve.params(), curve.period(), true, opts);
}

CrossingSet find_polyline_crossings(std::span<const Vec2> points, const CrossingOptions& opts) {
    return detect(points, nullptr, 0.0, false, opts);
}

}  // namespace torusinv
