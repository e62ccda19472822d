#include "torusinv/invariants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <sstream>

#include "torusinv/errors.hpp"

namespace torusinv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 d = b - a;
    const double len2 = dot(d, d);
    double s = len2 > 0 ? dot(p - a, d) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    return dist(p, a + s * d);
}

struct Event {
    std::size_t seg;
    double frac;
    std::size_t vertex;
};

}  // namespace

int turning_number(const ClosedCurve& curve) {
    const auto& q = curve.points();
    const std::size_t n = q.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 d0 = q[(i + 1) % n] - q[i];
        const Vec2 d1 = q[(i + 2) % n] - q[(i + 1) % n];
        const double a = turn_angle(d0, d1);
        if (std::abs(a) > kPi / 2) {
            std::ostringstream msg;
            msg << "tangent turns by " << a << " rad at sample " << (i + 1) % n << " (under-resolved cusp?)";
            throw Error(ErrorCode::NonImmersion, msg.str());
        }
        total += a;
    }
    return static_cast<int>(std::lround(total / (2 * kPi)));
}

int winding_number(const ClosedCurve& curve, Vec2 point, double tol) {
    const auto& q = curve.points();
    const std::size_t n = q.size();
    if (tol <= 0.0) tol = 1e-12 * curve.diameter();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = q[i], b = q[(i + 1) % n];
        if (point_segment_distance(point, a, b) <= tol)
            throw Error(ErrorCode::PointOnCurve, "point lies on segment " + std::to_string(i));
        total += turn_angle(a - point, b - point);
    }
    return static_cast<int>(std::lround(total / (2 * kPi)));
}

FaceDecomposition decompose_faces(const ClosedCurve& curve, const CrossingSet& crossings) {
    FaceDecomposition fd;
    const auto& q = curve.points();
    const std::size_t n = q.size();
    const Vec2 origin = curve.centroid();

    if (crossings.empty()) {
        // a single embedded loop: one edge, one dummy vertex, inside and outside
        double a = 0.0;
        for (std::size_t i = 0; i < n; ++i) a += cross(q[i] - origin, q[(i + 1) % n] - origin);
        fd.n_vertices = 1;
        fd.n_edges = 1;
        fd.faces = {{0}, {1}};
        fd.half_edge_face = {0, 1};
        fd.face_area = {0.5 * a, -0.5 * a};
        fd.unbounded_face = a > 0 ? 1 : 0;
        fd.face_winding = a > 0 ? std::vector<int>{1, 0} : std::vector<int>{0, -1};
        fd.vertex_index = {};
        return fd;
    }

    std::vector<Event> events;
    events.reserve(2 * crossings.size());
    for (std::size_t v = 0; v < crossings.size(); ++v) {
        events.push_back({crossings[v].seg_a, crossings[v].frac_a, v});
        events.push_back({crossings[v].seg_b, crossings[v].frac_b, v});
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return a.seg != b.seg ? a.seg < b.seg : a.frac < b.frac;
    });
    const std::size_t ne = events.size();
    fd.n_vertices = crossings.size();
    fd.n_edges = ne;

    auto tangent = [&](const Event& e) { return q[(e.seg + 1) % n] - q[e.seg]; };
    auto event_point = [&](const Event& e) { return q[e.seg] + e.frac * tangent(e); };

    // shoelace partial sums along each edge, relative to the centroid
    std::vector<double> edge_area(ne, 0.0);
    for (std::size_t k = 0; k < ne; ++k) {
        const Event& a = events[k];
        const Event& b = events[(k + 1) % ne];
        double s = 0.0;
        Vec2 prev = event_point(a) - origin;
        const bool same_seg_forward = a.seg == b.seg && a.frac < b.frac && k + 1 < ne;
        if (!same_seg_forward) {
            std::size_t i = (a.seg + 1) % n;
            while (true) {
                const Vec2 cur = q[i] - origin;
                s += cross(prev, cur);
                prev = cur;
                if (i == b.seg) break;
                i = (i + 1) % n;
            }
        }
        s += cross(prev, event_point(b) - origin);
        edge_area[k] = s;
    }

    // outgoing half-edges at each vertex, sorted counterclockwise
    const std::size_t nh = 2 * ne;
    std::vector<std::vector<std::pair<double, std::size_t>>> around(fd.n_vertices);
    std::vector<std::size_t> origin_vertex(nh);
    for (std::size_t k = 0; k < ne; ++k) {
        const Event& a = events[k];
        const Event& b = events[(k + 1) % ne];
        const Vec2 out_fwd = tangent(a);
        const Vec2 out_bwd = -tangent(b);
        around[a.vertex].push_back({std::atan2(out_fwd.y, out_fwd.x), 2 * k});
        around[b.vertex].push_back({std::atan2(out_bwd.y, out_bwd.x), 2 * k + 1});
        origin_vertex[2 * k] = a.vertex;
        origin_vertex[2 * k + 1] = b.vertex;
    }
    // position of each half-edge in its vertex's rotation
    std::vector<std::size_t> slot(nh);
    for (std::size_t v = 0; v < fd.n_vertices; ++v) {
        auto& r = around[v];
        if (r.size() != 4) throw Error(ErrorCode::InvalidInput, "vertex is not 4-valent");
        std::sort(r.begin(), r.end());
        for (std::size_t s = 0; s < 4; ++s) slot[r[s].second] = s;
    }
    auto twin = [](std::size_t h) { return h ^ 1u; };
    auto next = [&](std::size_t h) {
        const std::size_t t = twin(h);
        const auto& r = around[origin_vertex[t]];
        return r[(slot[t] + 3) % 4].second;  // clockwise neighbour of the twin
    };

    fd.half_edge_face.assign(nh, std::numeric_limits<std::size_t>::max());
    for (std::size_t h0 = 0; h0 < nh; ++h0) {
        if (fd.half_edge_face[h0] != std::numeric_limits<std::size_t>::max()) continue;
        const std::size_t f = fd.faces.size();
        fd.faces.emplace_back();
        double area = 0.0;
        std::size_t h = h0;
        do {
            fd.half_edge_face[h] = f;
            fd.faces[f].push_back(h);
            area += (h % 2 == 0) ? edge_area[h / 2] : -edge_area[h / 2];
            h = next(h);
            if (fd.faces[f].size() > nh) throw Error(ErrorCode::InvalidInput, "face walk does not close");
        } while (h != h0);
        fd.face_area.push_back(0.5 * area);
    }

    std::size_t negatives = 0;
    for (std::size_t f = 0; f < fd.faces.size(); ++f) {
        if (fd.face_area[f] < 0) {
            ++negatives;
            fd.unbounded_face = f;
        }
    }
    if (negatives != 1) {
        // numerically tiny faces may carry the wrong sign; the outer boundary is the most negative
        fd.unbounded_face = static_cast<std::size_t>(
            std::min_element(fd.face_area.begin(), fd.face_area.end()) - fd.face_area.begin());
    }

    // breadth-first winding propagation; left of the curve = right + 1
    constexpr int unset = std::numeric_limits<int>::min();
    fd.face_winding.assign(fd.faces.size(), unset);
    fd.face_winding[fd.unbounded_face] = 0;
    std::queue<std::size_t> todo;
    todo.push(fd.unbounded_face);
    while (!todo.empty()) {
        const std::size_t f = todo.front();
        todo.pop();
        for (std::size_t h : fd.faces[f]) {
            const std::size_t g = fd.half_edge_face[twin(h)];
            const int w = fd.face_winding[f] + ((h % 2 == 0) ? -1 : 1);
            if (fd.face_winding[g] == unset) {
                fd.face_winding[g] = w;
                todo.push(g);
            } else if (fd.face_winding[g] != w) {
                throw Error(ErrorCode::InvalidInput, "inconsistent face windings in arrangement");
            }
        }
    }

    fd.vertex_index.assign(fd.n_vertices, 0);
    for (std::size_t v = 0; v < fd.n_vertices; ++v) {
        int sum = 0;
        for (const auto& [angle, h] : around[v]) sum += fd.face_winding[fd.half_edge_face[h]];
        if (sum % 4 != 0) throw Error(ErrorCode::InvalidInput, "corner windings inconsistent at a vertex");
        fd.vertex_index[v] = sum / 4;
    }
    return fd;
}

int jplus_from_faces(const FaceDecomposition& fd) {
    long j = 1 + static_cast<long>(fd.vertex_index.size());
    for (std::size_t f = 0; f < fd.faces.size(); ++f) {
        const long w = fd.face_winding[f];
        j -= w * w;
    }
    for (auto ind : fd.vertex_index) j += static_cast<long>(ind) * ind;
    return static_cast<int>(j);
}

GenericityReport genericity_report(const ClosedCurve& curve, const CrossingSet& crossings,
                                   const GenericityThresholds& thr) {
    GenericityReport r{kInf, kInf, true};
    std::vector<double> events;
    events.reserve(2 * crossings.size());
    for (const auto& c : crossings) {
        r.min_crossing_angle = std::min(r.min_crossing_angle, std::min(c.angle, kPi - c.angle));
        events.push_back(c.param_a);
        events.push_back(c.param_b);
    }
    std::sort(events.begin(), events.end());
    const double T = curve.period();
    for (std::size_t i = 0; i < events.size(); ++i) {
        const double gap = i + 1 < events.size() ? events[i + 1] - events[i] : events.front() + T - events[i];
        r.min_param_gap = std::min(r.min_param_gap, gap);
    }
    r.pass = r.min_crossing_angle >= thr.min_angle && r.min_param_gap >= thr.min_param_gap_fraction * T;
    return r;
}

namespace {

CrossingSet generic_crossings(const ClosedCurve& curve, const GenericityThresholds& thr, GenericityReport* rep) {
    CrossingOptions opts;
    opts.min_angle = thr.min_angle;
    auto cs = find_crossings(curve, opts);
    const auto g = genericity_report(curve, cs, thr);
    if (!g.pass) {
        std::ostringstream msg;
        msg << "curve is not generic: min crossing angle " << g.min_crossing_angle << " rad, min parameter gap "
            << g.min_param_gap << " (period " << curve.period() << ")";
        throw Error(ErrorCode::GenericityFailure, msg.str());
    }
    if (rep) *rep = g;
    return cs;
}

}  // namespace

int jplus(const ClosedCurve& curve, const GenericityThresholds& thr) {
    turning_number(curve);
    const auto cs = generic_crossings(curve, thr, nullptr);
    return jplus_from_faces(decompose_faces(curve, cs));
}

HalfInteger j1(const ClosedCurve& curve, Vec2 center, const GenericityThresholds& thr) {
    const int w = winding_number(curve, center);
    return HalfInteger::from_twice(2L * jplus(curve, thr) + static_cast<long>(w) * w);
}

ClosedCurve levi_civita_lift(const ClosedCurve& curve, Vec2 center, bool other_branch) {
    const int w0 = winding_number(curve, center);
    const auto& q = curve.points();
    const std::size_t n = q.size();

    // refine segments that sweep a large angle or pass close to the center
    std::vector<Vec2> z;
    std::vector<double> t;
    z.reserve(n);
    t.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = q[i] - center, b = q[(i + 1) % n] - center;
        const double ta = curve.param(i), tb = curve.param_end(i);
        const double sweep = std::abs(turn_angle(a, b));
        const double near = std::min({norm(a), norm(b), point_segment_distance({0, 0}, a, b)});
        const double len = dist(a, b);
        const double pieces = std::ceil(std::max({1.0, sweep / 0.05, len / (0.1 * near)}));
        const auto m = static_cast<std::size_t>(std::min(pieces, 1e5));
        for (std::size_t s = 0; s < m; ++s) {
            const double f = static_cast<double>(s) / static_cast<double>(m);
            z.push_back(a + f * (b - a));
            t.push_back(ta + f * (tb - ta));
        }
    }

    auto principal = [](Vec2 v) {
        const double r = std::sqrt(norm(v));
        const double phi = 0.5 * std::atan2(v.y, v.x);
        return Vec2{r * std::cos(phi), r * std::sin(phi)};
    };

    const std::size_t m = z.size();
    const std::size_t passes = (w0 % 2 == 0) ? 1 : 2;
    std::vector<Vec2> lift;
    std::vector<double> lt;
    lift.reserve(passes * m);
    lt.reserve(passes * m);
    Vec2 prev = principal(z[0]);
    if (other_branch) prev = -prev;
    for (std::size_t p = 0; p < passes; ++p) {
        for (std::size_t i = 0; i < m; ++i) {
            Vec2 r = principal(z[i]);
            if (!lift.empty()) {
                if (dist(r, prev) > dist(-r, prev)) r = -r;
                // both roots straddle the previous sample: the branch is ambiguous
                if (std::abs(turn_angle(prev, r)) > kPi / 4) {
                    throw Error(ErrorCode::BranchDiscontinuity,
                                "lifted samples jump near parameter " + std::to_string(t[i]));
                }
            } else {
                r = prev;
            }
            lift.push_back(r);
            lt.push_back(t[i] + static_cast<double>(p) * curve.period());
            prev = r;
        }
    }
    // closing step must stay on the same branch
    if (std::abs(turn_angle(prev, lift.front())) > kPi / 4)
        throw Error(ErrorCode::BranchDiscontinuity, "lift does not close on the expected branch");
    return ClosedCurve(std::move(lt), std::move(lift), static_cast<double>(passes) * curve.period());
}

int j2(const ClosedCurve& curve, Vec2 center, const GenericityThresholds& thr) {
    return jplus(levi_civita_lift(curve, center), thr);
}

std::vector<MultiplePoint> cluster_multiple_points(const CrossingSet& crossings, double radius, int branch_cover) {
    const std::size_t n = crossings.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return crossings[a].point.x < crossings[b].point.x; });
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            const auto& a = crossings[order[u]].point;
            const auto& b = crossings[order[v]].point;
            if (b.x - a.x > radius) break;
            if (dist(a, b) <= radius) parent[find(order[u])] = find(order[v]);
        }
    }
    std::vector<MultiplePoint> out;
    std::vector<std::size_t> index(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (index[r] == n) {
            index[r] = out.size();
            out.push_back({});
        }
        auto& mp = out[index[r]];
        mp.point = mp.point + crossings[i].point;
        ++mp.pair_events;
    }
    for (auto& mp : out) {
        mp.point = (1.0 / static_cast<double>(mp.pair_events)) * mp.point;
        // m(m-1)/2 = pair events
        const double m = 0.5 * (1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(mp.pair_events)));
        const long mi = std::lround(m);
        if (mi * (mi - 1) / 2 != static_cast<long>(mp.pair_events)) {
            throw Error(ErrorCode::AmbiguousClustering, "cluster with " + std::to_string(mp.pair_events) +
                                                            " pair events is not a complete branch meeting");
        }
        mp.multiplicity = branch_cover * static_cast<int>(mi);
    }
    for (std::size_t a = 0; a < out.size(); ++a) {
        for (std::size_t b = a + 1; b < out.size(); ++b) {
            if (dist(out[a].point, out[b].point) < 3.0 * radius)
                throw Error(ErrorCode::AmbiguousClustering, "two clusters closer than three times the radius");
        }
    }
    std::sort(out.begin(), out.end(), [](const MultiplePoint& a, const MultiplePoint& b) {
        return a.point.x != b.point.x ? a.point.x < b.point.x : a.point.y < b.point.y;
    });
    return out;
}

InvariantReport compute_invariants(const ClosedCurve& curve, Vec2 center, const GenericityThresholds& thr) {
    InvariantReport r;
    r.turning_number = turning_number(curve);
    GenericityReport g{};
    const auto cs = generic_crossings(curve, thr, &g);
    r.n_double_points = cs.size();
    r.min_crossing_angle = g.min_crossing_angle;
    r.min_param_gap = g.min_param_gap;
    r.w0 = winding_number(curve, center);
    r.jplus = jplus_from_faces(decompose_faces(curve, cs));
    r.j1 = HalfInteger::from_twice(2L * r.jplus + static_cast<long>(r.w0) * r.w0);

    const auto lift = levi_civita_lift(curve, center);
    turning_number(lift);
    GenericityReport lg{};
    const auto lcs = generic_crossings(lift, thr, &lg);
    r.lift_double_points = lcs.size();
    r.lift_min_crossing_angle = lg.min_crossing_angle;
    r.j2 = jplus_from_faces(decompose_faces(lift, lcs));
    return r;
}

}  // namespace torusinv
