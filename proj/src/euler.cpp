#include "torusinv/euler.hpp"

#include <algorithm>
#include <array>
#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <iterator>
#include <limits>
#include <numbers>
#include <sstream>

#include "torusinv/crossings.hpp"
#include "torusinv/errors.hpp"

namespace torusinv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Vec2 kMoon{1.0, 0.0};

void require_mu(double mu) {
    if (!(mu > 0.0 && mu < 1.0)) throw Error(ErrorCode::InvalidInput, "mass ratio must lie in (0, 1)");
}

// Breakpoints in the co-angle phi = pi/2 - theta on [0, pi/2], graded
// towards phi = 0 when the integrand has a peak of width sqrt(eps) there
// (nu oscillator close to the separatrix). Working in phi keeps the small
// distances to the turning point exact.
std::vector<double> co_breaks(double eps) {
    std::vector<double> b;
    for (int i = 0; i <= 64; ++i) b.push_back(kPi / 2 * i / 64.0);
    const double w = std::sqrt(std::max(eps, 0.0));
    if (w < 0.05) {
        for (double d = w / 8; d < 0.05; d *= 2) b.push_back(d);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

std::vector<double> theta_breaks(const std::vector<double>& co) {
    std::vector<double> b;
    for (double x : co) b.push_back(kPi / 2 - x);
    std::sort(b.begin(), b.end());
    b.front() = 0.0;
    return b;
}

// Oscillator data in the shifted variables v = cosh(lambda) - 1 and u = cos(nu) + 1.
// Both quadratics are written so that the small roots are free of cancellation.
struct Separation {
    double c, mu;
    double v_plus, v_minus;  // roots of c v^2 + 2(1+c) v + (s+2)
    double u1, u2;           // roots of -c u^2 - 2(1-2mu-c) u + delta
    double gap_nu;           // u2 - u1
    double A, Bn;            // sinh(lambda_max/2), sin(sigma_max/2)
    std::vector<double> co_lambda, co_nu;  // breakpoints in pi/2 - theta

    // dc = c1 - c and dg = g + c + 2 are the distances to the corner of S,
    // where the tori degenerate; the discriminants below are written in them.
    Separation(double mu_, TorusOffsets o) : mu(mu_) {
        const double m = mu * (1 - mu);
        const double W = 4 * (1 - mu);
        if (!(o.dc > 0) || !(o.dg > 0) || !(o.dg < W)) {
            std::ostringstream msg;
            msg << "no Earth-component libration at offsets (dc, dg) = (" << o.dc << ", " << o.dg << "), mu = " << mu;
            throw Error(ErrorCode::NoLibration, msg.str());
        }
        c = critical_energy(mu) - o.dc;
        const double D = (1 + c) * (1 + c) - c * o.dg;  // 1 - c g
        v_plus = o.dg / (std::abs(1 + c) + std::sqrt(D));
        v_minus = o.dg / (c * v_plus);
        const double delta = W - o.dg;  // 2(1 - 2mu) - s
        const double b = 2 * (1 - 2 * mu - c);
        const double disc = 4 * (o.dc * (4 * std::sqrt(m) + o.dc) - c * o.dg);  // b^2 + 4 c delta
        u1 = 2 * delta / (b + std::sqrt(disc));
        u2 = delta / (-c * u1);
        gap_nu = std::sqrt(disc) / -c;
        A = std::sqrt(v_plus / 2);
        Bn = std::sqrt(u1 / 2);
        if (!(Bn < 1)) throw Error(ErrorCode::NoLibration, "nu window covers the full circle");
        co_lambda = co_breaks(-v_minus / std::max(v_plus, 1e-300));
        co_nu = co_breaks(gap_nu / std::max(u1, 1e-300));
    }

    // d tau / d theta for the two angle parametrisations
    double rate_lambda(double theta) const {
        const double sn = std::sin(theta);
        const double v = v_plus * sn * sn;
        return 0.5 / std::sqrt((2 + v) * (-c / 2) * (v - v_minus));
    }
    double rate_nu(double theta) const { return rate_nu_sc(std::sin(theta), std::cos(theta)); }
    // same, as functions of the co-angle pi/2 - theta
    double rate_lambda_co(double phi) const {
        const double sn = std::cos(phi);
        const double v = v_plus * sn * sn;
        return 0.5 / std::sqrt((2 + v) * (-c / 2) * (v - v_minus));
    }
    double rate_nu_co(double phi) const { return rate_nu_sc(std::cos(phi), std::sin(phi)); }

private:
    double rate_nu_sc(double sn, double cs) const {
        const double u = u1 * sn * sn;
        // u2 - u without cancellation near the separatrix
        return 0.5 / std::sqrt((2 - u) * (-c / 2) * (gap_nu + u1 * cs * cs));
    }
};

// Gauss-Kronrod on [a, b], mapped onto [-1, 1] first: boost reports the
// error estimate in the units of the reference interval.
template <unsigned N, class F>
double gk(const F& f, double a, double b, unsigned depth, double tol, double* err) {
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    return boost::math::quadrature::gauss_kronrod<double, N>::integrate([&](double x) { return h * f(m + h * x); },
                                                                         -1.0, 1.0, depth, tol, err);
}

double quarter_integral(const std::function<double(double)>& f, const std::vector<double>& breaks) {
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        double err = 0.0;
        total += gk<31>(f, breaks[i], breaks[i + 1], 8, 1e-13, &err);
        total_err += err;
    }
    if (!std::isfinite(total) || total_err > 1e-11 * std::abs(total)) {
        std::ostringstream msg;
        msg << "period quadrature error estimate " << total_err << " for value " << total;
        throw Error(ErrorCode::QuadratureFailure, msg.str());
    }
    return total;
}

// Tabulated regularised time along one angle cycle, inverted by Newton.
class PhaseClock {
public:
    // quarter: breakpoints on [0, pi/2]; the rate is even about pi/2 and pi-periodic
    PhaseClock(std::function<double(double)> rate, const std::vector<double>& quarter) : rate_(std::move(rate)) {
        for (int rep = 0; rep < 4; ++rep) {
            for (double b : quarter) {
                const double th = rep % 2 == 0 ? rep / 2 * kPi + b : (rep + 1) / 2 * kPi - b;
                theta_.push_back(th);
            }
        }
        std::sort(theta_.begin(), theta_.end());
        theta_.erase(std::unique(theta_.begin(), theta_.end()), theta_.end());
        for (std::size_t j = 0; j < 4; ++j) {
            const std::size_t cells = 256;
            const double a = j * kPi / 2, b = (j + 1) * kPi / 2;
            for (std::size_t i = 1; i < cells; ++i) theta_.push_back(a + (b - a) * i / cells);
        }
        std::sort(theta_.begin(), theta_.end());
        theta_.erase(std::unique(theta_.begin(), theta_.end()), theta_.end());
        tau_.assign(theta_.size(), 0.0);
        for (std::size_t j = 0; j + 1 < theta_.size(); ++j) tau_[j + 1] = tau_[j] + integrate(theta_[j], theta_[j + 1]);
    }

    double period() const { return tau_.back(); }

    // angle reached after regularised time tau from theta = 0
    double theta(double tau) const {
        const double T = period();
        const double turns = std::floor(tau / T);
        double r = tau - turns * T;
        if (r >= T) r = 0.0;
        auto it = std::upper_bound(tau_.begin(), tau_.end(), r);
        std::size_t j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - tau_.begin() - 1, 0));
        j = std::min(j, theta_.size() - 2);
        double lo = theta_[j], hi = theta_[j + 1];
        double th = lo + (r - tau_[j]) / rate_(lo);
        if (!(th > lo && th < hi)) th = 0.5 * (lo + hi);
        for (int it2 = 0; it2 < 60; ++it2) {
            const double f = tau_[j] + integrate(theta_[j], th) - r;
            if (f > 0)
                hi = th;
            else
                lo = th;
            const double step = f / rate_(th);
            double next = th - step;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - th) < 1e-15 || hi - lo < 1e-15) {
                th = next;
                break;
            }
            th = next;
        }
        return th + 2 * kPi * turns;
    }

private:
    double integrate(double a, double b) const {
        if (b <= a) return 0.0;
        return gk<15>(rate_, a, b, 3, 1e-13, nullptr);
    }

    std::function<double(double)> rate_;
    std::vector<double> theta_;
    std::vector<double> tau_;
};


double segment_distance(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
    double s = 0, t = 0;
    if (segments_intersect(a0, a1, b0, b1, s, t)) return 0.0;
    auto point_seg = [](Vec2 p, Vec2 u, Vec2 v) {
        const Vec2 d = v - u;
        const double L2 = dot(d, d);
        const double f = L2 > 0 ? std::clamp(dot(p - u, d) / L2, 0.0, 1.0) : 0.0;
        return dist(p, u + d * f);
    };
    return std::min({point_seg(a0, b0, b1), point_seg(a1, b0, b1), point_seg(b0, a0, a1), point_seg(b1, a0, a1)});
}

// Segments of a closed polyline that come within a few chord sags of a
// nearly parallel, non-adjacent segment. The sag is estimated from the
// turning at both ends; segments already at rounding level are left alone.
std::vector<bool> close_branch_segments(const std::vector<Vec2>& q) {
    const std::size_t m = q.size();
    std::vector<double> sag(m);
    std::vector<double> lens(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2 a = q[(i + m - 1) % m], b = q[i], c = q[(i + 1) % m], d = q[(i + 2) % m];
        const double h = dist(b, c);
        lens[i] = h;
        const double turn = 0.5 * (std::abs(turn_angle(b - a, c - b)) + std::abs(turn_angle(c - b, d - c)));
        sag[i] = h * turn / 8 + 1e-16 * std::max(norm(b), norm(c));
    }
    namespace bg = boost::geometry;
    using Point = bg::model::point<double, 2, bg::cs::cartesian>;
    using Box = bg::model::box<Point>;
    auto padded = [&](std::size_t i) {
        const Vec2 a = q[i], b = q[(i + 1) % m];
        const double pad = 4 * sag[i];
        return Box(Point(std::min(a.x, b.x) - pad, std::min(a.y, b.y) - pad),
                   Point(std::max(a.x, b.x) + pad, std::max(a.y, b.y) + pad));
    };
    std::vector<std::pair<Box, std::size_t>> boxes(m);
    for (std::size_t i = 0; i < m; ++i) boxes[i] = {padded(i), i};
    const bg::index::rtree<std::pair<Box, std::size_t>, bg::index::rstar<16>> tree(boxes);
    std::vector<bool> split(m, false);
    std::vector<std::pair<Box, std::size_t>> hits;
    for (std::size_t i = 0; i < m; ++i) {
        hits.clear();
        tree.query(bg::index::intersects(boxes[i].first), std::back_inserter(hits));
        for (const auto& [box, j] : hits) {
            if (j <= i) continue;
            const std::size_t gap = j - i;
            if (gap <= 1 || gap == m - 1) continue;
            if (split[i] && split[j]) continue;
            const Vec2 a0 = q[i], a1 = q[(i + 1) % m], b0 = q[j], b1 = q[(j + 1) % m];
            const Vec2 da = a1 - a0, db = b1 - b0;
            const double sin_ang = std::abs(cross(da, db)) / (norm(da) * norm(db));
            if (sin_ang > 0.1) continue;
            const double slack = 4 * (sag[i] + sag[j]);
            const double d = segment_distance(a0, a1, b0, b1);
            if (d >= slack) continue;
            // a transversal crossing is settled once the branches diverge
            // faster than the chords sag
            if (d == 0 && slack < 0.5 * sin_ang * std::min(lens[i], lens[j])) continue;
            // below this the samples themselves are rounding noise
            if (lens[i] > 1e-13 * norm(a0)) split[i] = true;
            if (lens[j] > 1e-13 * norm(b0)) split[j] = true;
        }
    }
    return split;
}

}  // namespace

Vec2 elliptic_to_cartesian(double lambda, double nu) {
    return {0.5 * std::cosh(lambda) * std::cos(nu), 0.5 * std::sinh(lambda) * std::sin(nu)};
}

namespace {

// Cartesian momentum from elliptic momenta, given sin and cos of nu
Vec2 elliptic_momentum(double lambda, double sn, double cn, double p_lambda, double p_nu) {
    const double ch = std::cosh(lambda), sh = std::sinh(lambda);
    // rows: dq/dlambda and dq/dnu
    const double a11 = 0.5 * sh * cn, a12 = 0.5 * ch * sn;
    const double a21 = -0.5 * ch * sn, a22 = 0.5 * sh * cn;
    const double det = a11 * a22 - a12 * a21;
    if (std::abs(det) < 1e-24) throw Error(ErrorCode::CollisionPoint, "momentum map degenerates at a primary");
    return {(a22 * p_lambda - a12 * p_nu) / det, (-a21 * p_lambda + a11 * p_nu) / det};
}

}  // namespace

CartesianState to_cartesian(const EllipticState& s) {
    CartesianState out;
    out.q = elliptic_to_cartesian(s.lambda, s.nu) + kEarthShift;
    out.p = elliptic_momentum(s.lambda, std::sin(s.nu), std::cos(s.nu), s.p_lambda, s.p_nu);
    return out;
}

double k_lambda(const EllipticState& s, double c) {
    const double ch = std::cosh(s.lambda);
    return 2 * s.p_lambda * s.p_lambda - 2 * ch - c * ch * ch;
}

double k_nu(const EllipticState& s, double c, double mu) {
    const double cn = std::cos(s.nu);
    return 2 * s.p_nu * s.p_nu + 2 * (1 - 2 * mu) * cn + c * cn * cn;
}

EulerIntegrals euler_integrals(Vec2 q, Vec2 p, double mu, double tol) {
    require_mu(mu);
    const double rE = norm(q), rM = dist(q, kMoon);
    if (rE < tol || rM < tol) throw Error(ErrorCode::CollisionPoint, "integrals undefined at a primary");
    EulerIntegrals r;
    r.H = 0.5 * dot(p, p) - (1 - mu) / rE - mu / rM;
    const double L = cross(q, p);
    r.B = -L * L + L * p.y - (1 - mu) * q.x / rE - mu * (1 - q.x) / rM;
    r.G = -r.H + 2 * r.B;
    return r;
}

double critical_energy(double mu) {
    require_mu(mu);
    return -1 - 2 * std::sqrt(mu * (1 - mu));
}

std::string to_string(Region r) {
    switch (r) {
        case Region::S: return "S";
        case Region::SPrime: return "S'";
        case Region::Boundary: return "boundary";
        case Region::Forbidden: return "forbidden";
        case Region::Other: return "other";
    }
    return "?";
}

Region classify_region(double g, double c, double mu, double tol) {
    require_mu(mu);
    if (!(c < critical_energy(mu))) return Region::Other;
    const double s = g + c;
    const double edge = 2 * (1 - 2 * mu);
    for (double b : {-2.0, -edge, edge})
        if (std::abs(s - b) <= tol) return Region::Boundary;
    if (s < -2 || s > edge) return Region::Forbidden;
    return s < -edge ? Region::S : Region::SPrime;
}

TorusOffsets torus_offsets(double g, double c, double mu) { return {critical_energy(mu) - c, g + c + 2}; }

TorusOffsets torus_offsets(const EulerParams& e) {
    if (std::isfinite(e.dc) && std::isfinite(e.dg)) return {e.dc, e.dg};
    return torus_offsets(e.g, e.c, e.mu);
}

TurningPoints turning_points(double g, double c, double mu) {
    require_mu(mu);
    return turning_points(mu, torus_offsets(g, c, mu));
}

TurningPoints turning_points(double mu, TorusOffsets o) {
    require_mu(mu);
    const Separation sep(mu, o);
    TurningPoints tp;
    tp.x_plus = 1 + sep.v_plus;
    tp.x_minus = 1 + sep.v_minus;
    tp.lambda_max = 2 * std::asinh(sep.A);
    tp.y1 = -1 + sep.u1;
    tp.y2 = -1 + sep.u2;
    tp.sigma_max = 2 * std::asin(sep.Bn);
    return tp;
}

SeparatedPeriods separated_periods(double mu, TorusOffsets o) {
    require_mu(mu);
    const Separation sep(mu, o);
    SeparatedPeriods p;
    p.T_lambda = 4 * quarter_integral([&](double phi) { return sep.rate_lambda_co(phi); }, sep.co_lambda);
    p.T_nu = 4 * quarter_integral([&](double phi) { return sep.rate_nu_co(phi); }, sep.co_nu);
    return p;
}

SeparatedPeriods separated_periods(double g, double c, double mu) {
    require_mu(mu);
    return separated_periods(mu, torus_offsets(g, c, mu));
}

double rotation_number(double mu, TorusOffsets o) {
    const auto p = separated_periods(mu, o);
    return p.T_nu / p.T_lambda;
}

double rotation_number(double g, double c, double mu) {
    const auto p = separated_periods(g, c, mu);
    return p.T_nu / p.T_lambda;
}

Interval admissible_g_interval(double c, double mu) {
    if (!(c < critical_energy(mu)))
        throw Error(ErrorCode::InvalidInput, "energy must lie below the critical value");
    return {-2 - c, 2 * (1 - 2 * mu) - c};
}

namespace {

double g_width(double mu) { return 4 * (1 - mu); }

// Innermost offsets sampled at either end of the g-interval; the lower end
// is where R grows, and dg stays exact there.
constexpr double kLowEnd = 1e-20;
constexpr double kHighEnd = 1e-15;

void require_offset(double dc) {
    if (!(dc > 0) || !std::isfinite(dc))
        throw Error(ErrorCode::InvalidInput, "energy must lie below the critical value");
}

}  // namespace

Interval rotation_range_at(double mu, double dc) {
    require_mu(mu);
    require_offset(dc);
    const double w = g_width(mu);
    // the degenerate end tori are still regular for the quadrature
    const double a = rotation_number(mu, {dc, kLowEnd * w});
    const double b = rotation_number(mu, {dc, w * (1 - kHighEnd)});
    return {std::min(a, b), std::max(a, b)};
}

Interval rotation_range(double c, double mu) {
    admissible_g_interval(c, mu);
    return rotation_range_at(mu, critical_energy(mu) - c);
}

std::vector<ResonanceRoot> solve_resonance_at(double mu, double dc, int k, int l) {
    require_mu(mu);
    require_resonance(k, l);
    require_offset(dc);
    const double r = static_cast<double>(k) / l;
    const double w = g_width(mu);
    const double c = critical_energy(mu) - dc;

    // 200 offsets, geometrically clustered towards both ends where R varies fastest
    std::vector<double> grid;
    for (int i = 0; i < 100; ++i) {
        grid.push_back(0.5 * w * std::pow(10.0, std::log10(kLowEnd) * (1 - i / 100.0)));
        grid.push_back(w - 0.5 * w * std::pow(10.0, std::log10(kHighEnd) * (1 - i / 100.0)));
    }
    std::sort(grid.begin(), grid.end());
    std::vector<double> R(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) R[i] = rotation_number(mu, {dc, grid[i]});

    std::vector<ResonanceRoot> roots;
    auto add_root = [&](double dg, double Rg) { roots.push_back({dg - 2 - c, Rg, dg}); };
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double f0 = R[i] - r, f1 = R[i + 1] - r;
        if (f0 == 0) {
            add_root(grid[i], R[i]);
            continue;
        }
        if ((f0 < 0) == (f1 < 0)) continue;
        double lo = grid[i], hi = grid[i + 1], flo = f0;
        double dg = 0.5 * (lo + hi), Rg = r;
        for (int it = 0; it < 200; ++it) {
            dg = 0.5 * (lo + hi);
            Rg = rotation_number(mu, {dc, dg});
            const double f = Rg - r;
            if (std::abs(f) < 1e-14 * r || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * dg) break;
            if ((f < 0) == (flo < 0)) {
                lo = dg;
                flo = f;
            } else {
                hi = dg;
            }
        }
        // a bracket that does not close onto a root is a discontinuity, not a resonance
        if (std::abs(Rg - r) < 1e-10) add_root(dg, Rg);
    }
    if (roots.empty()) {
        const auto [rmin, rmax] = std::minmax_element(R.begin(), R.end());
        std::ostringstream msg;
        msg.precision(12);
        msg << "rotation number " << k << "/" << l << " not attainable at c = c1 - " << dc << ", mu = " << mu
            << "; attainable range [" << *rmin << ", " << *rmax << "]";
        throw Error(ErrorCode::ResonanceOutOfRange, msg.str());
    }
    return roots;
}

std::vector<ResonanceRoot> solve_resonance(double c, double mu, int k, int l) {
    admissible_g_interval(c, mu);
    return solve_resonance_at(mu, critical_energy(mu) - c, k, l);
}

EnergyChoice default_energy(double mu, int k, int l) {
    require_mu(mu);
    require_resonance(k, l);
    const double c1 = critical_energy(mu);
    const double r = static_cast<double>(k) / l;
    auto attainable = [&](double dc) {
        const auto rr = rotation_range_at(mu, dc);
        return rr.lo < r && r < rr.hi;
    };
    // ladder in log(dc) from far below the critical value towards it
    constexpr double kFloor = 1e-30, kCeil = 10.0;
    std::vector<double> ladder;
    for (double e = std::log10(kCeil); e >= std::log10(kFloor) - 1e-9; e -= 0.25) ladder.push_back(std::pow(10.0, e));
    std::size_t first = ladder.size();
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (attainable(ladder[i])) {
            first = i;
            break;
        }
    }
    if (first == ladder.size()) {
        const auto rr = rotation_range_at(mu, kFloor);
        std::ostringstream msg;
        msg.precision(12);
        msg << "rotation number " << k << "/" << l << " is not attainable for any energy in [c1 - " << kCeil
            << ", c1 - " << kFloor << "] at mu = " << mu << "; closest to c1 the attainable range is [" << rr.lo
            << ", " << rr.hi << "]";
        throw Error(ErrorCode::ResonanceOutOfRange, msg.str());
    }
    double far = ladder[first];
    if (first > 0) {
        double lo = std::log10(ladder[first]), hi = std::log10(ladder[first - 1]);
        for (int it = 0; it < 40; ++it) {
            const double m = 0.5 * (lo + hi);
            if (attainable(std::pow(10.0, m)))
                lo = m;
            else
                hi = m;
        }
        far = std::pow(10.0, lo);
    }
    // nearest attainable energy to c1 on the ladder
    double near = far;
    for (std::size_t i = first; i < ladder.size() && attainable(ladder[i]); ++i) near = ladder[i];
    EnergyChoice ec;
    ec.c_lo = c1 - far;
    ec.c_hi = c1 - near;
    ec.dc = 0.5 * (far + near);
    ec.c = c1 - ec.dc;
    return ec;
}

std::string to_string(OrbitKind k) {
    switch (k) {
        case OrbitKind::Generic: return "generic";
        case OrbitKind::BrakeBrake: return "brake-brake";
        case OrbitKind::BrakeCollision: return "brake-collision";
        case OrbitKind::CollisionCollision: return "collision-collision";
    }
    return "?";
}

std::optional<OrbitKind> parse_orbit_kind(const std::string& s) {
    for (auto k : {OrbitKind::Generic, OrbitKind::BrakeBrake, OrbitKind::BrakeCollision,
                   OrbitKind::CollisionCollision})
        if (s == to_string(k)) return k;
    return std::nullopt;
}

void require_kind_available(int k, int l, OrbitKind kind) {
    const bool odd = (k + l) % 2 == 1;
    const auto fail = [&](const char* why) {
        throw Error(ErrorCode::KindUnavailable, to_string(kind) + " orbits do not exist on T_{" + std::to_string(k) +
                                                    "," + std::to_string(l) + "} tori: " + why);
    };
    if (kind == OrbitKind::BrakeBrake && !odd) fail("k + l is even, so both reversal points cannot be brakes");
    if (kind == OrbitKind::CollisionCollision && !odd) fail("k + l is even, so every collision orbit also brakes");
    if (kind == OrbitKind::BrakeCollision && odd) fail("k + l is odd, so reversal points come in equal pairs");
}

EulerTorusParams make_torus(double mu, int k, int l, std::optional<double> c, OrbitKind kind, double phase) {
    require_mu(mu);
    require_resonance(k, l);
    require_kind_available(k, l, kind);
    const double c1 = critical_energy(mu);
    if (c && !(*c < c1)) {
        std::ostringstream msg;
        msg << "energy " << *c << " is not below the critical value " << c1;
        throw Error(ErrorCode::InvalidInput, msg.str());
    }
    const double dc = c ? c1 - *c : default_energy(mu, k, l).dc;
    const auto roots = solve_resonance_at(mu, dc, k, l);
    const auto& root = roots.front();
    EulerTorusParams p;
    p.k = k;
    p.l = l;
    p.euler.mu = mu;
    p.euler.c = c1 - dc;
    p.euler.g = root.g;
    p.euler.dc = dc;
    p.euler.dg = root.dg;
    p.euler.region = root.dg < 4 * mu ? Region::S : Region::SPrime;
    p.kind = kind;
    p.phase = phase;
    return p;
}

EulerOrbit synthesize_orbit(const EulerTorusParams& params, std::size_t samples_per_lambda_cycle) {
    const int k = params.k, l = params.l;
    require_resonance(k, l);
    require_kind_available(k, l, params.kind);
    const auto& e = params.euler;
    require_mu(e.mu);
    if (samples_per_lambda_cycle < 64) throw Error(ErrorCode::InvalidInput, "too few samples per cycle");
    const Separation sep(e.mu, torus_offsets(e));

    PhaseClock clock_l([&sep](double th) { return sep.rate_lambda(th); }, theta_breaks(sep.co_lambda));
    PhaseClock clock_n([&sep](double th) { return sep.rate_nu(th); }, theta_breaks(sep.co_nu));
    EulerOrbit orb;
    orb.params = params;
    orb.T_lambda = clock_l.period();
    orb.T_nu = clock_n.period();
    orb.T = k * orb.T_lambda;
    const double mismatch = std::abs(k * orb.T_lambda - l * orb.T_nu) / orb.T;
    if (mismatch > 1e-8) {
        std::ostringstream msg;
        msg << "torus is not resonant: k T_lambda and l T_nu differ by " << mismatch << " relative";
        throw Error(ErrorCode::InvalidInput, msg.str());
    }
    // stretch the nu clock so that both close exactly at T
    const double nu_scale = l * orb.T_nu / orb.T;
    const double unit = orb.T / (2.0 * k * l);

    double tl0 = 0.0, tn0 = 0.0;
    switch (params.kind) {
        case OrbitKind::Generic:
            tl0 = orb.T_lambda / 4 - params.phase * unit;
            tn0 = orb.T_nu / 4;
            break;
        case OrbitKind::BrakeBrake:
            tl0 = orb.T_lambda / 4;
            tn0 = orb.T_nu / 4;
            break;
        case OrbitKind::BrakeCollision:
        case OrbitKind::CollisionCollision:
            tl0 = 0.0;
            tn0 = params.mirror ? orb.T_nu / 2 : 0.0;
            break;
    }

    auto state_at = [&](double tau) {
        const double thl = clock_l.theta(tau + tl0);
        const double thn = clock_n.theta(tau * nu_scale + tn0);
        const double sl = std::sin(thl), cl = std::cos(thl);
        const double sn = std::sin(thn), cn = std::cos(thn);
        EllipticState s;
        s.lambda = 2 * std::asinh(sep.A * sl);
        const double sigma = 2 * std::asin(sep.Bn * sn);
        s.nu = sigma >= 0 ? sigma - kPi : sigma + kPi;
        s.p_lambda = (2 * sep.A * cl / std::sqrt(1 + sep.A * sep.A * sl * sl)) / (4 * sep.rate_lambda(thl));
        s.p_nu = (2 * sep.Bn * cn / std::sqrt(1 - sep.Bn * sep.Bn * sn * sn)) / (4 * sep.rate_nu(thn));
        return std::pair{s, sigma};
    };
    auto earth_frame = [](double lambda, double sigma) {
        // nu = pi + sigma; written to keep accuracy close to the Earth
        const double sh2 = std::sinh(lambda / 2), ss2 = std::sin(sigma / 2);
        const double q1 = ss2 * ss2 - sh2 * sh2 * std::cos(sigma);
        return Vec2{q1, -0.5 * std::sinh(lambda) * std::sin(sigma)};
    };

    orb.traversals = (k + l) % 2 == 0 ? 2 : 1;
    if (orb.traversals == 2) {
        for (int i = 0; i < 16; ++i) {
            const double tau = orb.T * (i + 0.37) / 16;
            const auto [a, sa] = state_at(tau);
            const auto [b, sb] = state_at(tau + orb.T / 2);
            if (std::abs(a.lambda + b.lambda) > 1e-8 || std::abs(sa + sb) > 1e-8)
                throw Error(ErrorCode::ClosureFailure, "deck symmetry over half a period failed");
        }
    }
    const double Tc = orb.T / orb.traversals;
    const std::size_t n = samples_per_lambda_cycle * static_cast<std::size_t>(k) / static_cast<std::size_t>(orb.traversals);
    // Generic orbits: shift the grid off the symmetric times, where mirror
    // branches would cross exactly at a shared sample.
    const double offset = params.kind == OrbitKind::Generic ? 0.3819660112501051 : 0.0;
    std::vector<double> ts(n);
    for (std::size_t i = 0; i < n; ++i) ts[i] = Tc * (static_cast<double>(i) + offset) / static_cast<double>(n);
    // momenta from sigma directly: nu itself has lost the digits that
    // matter next to the Earth
    auto momentum = [](const EllipticState& s, double sigma) {
        const double sh = std::sinh(s.lambda), ss = std::sin(sigma);
        return sh * sh + ss * ss > 1e-18
                   ? elliptic_momentum(s.lambda, -std::sin(sigma), -std::cos(sigma), s.p_lambda, s.p_nu)
                   : Vec2{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    };
    std::vector<EllipticState> states(n);
    std::vector<Vec2> qs(n), ps(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [s, sigma] = state_at(ts[i]);
        states[i] = s;
        qs[i] = earth_frame(s.lambda, sigma);
        ps[i] = momentum(s, sigma);
    }
    {
        auto split_marked = [&](const std::vector<bool>& split) {
            const std::size_t m = ts.size();
            std::size_t added = 0;
            std::vector<double> t2;
            std::vector<EllipticState> s2;
            std::vector<Vec2> q2, p2;
            for (std::size_t i = 0; i < m; ++i) {
                t2.push_back(ts[i]);
                s2.push_back(states[i]);
                q2.push_back(qs[i]);
                p2.push_back(ps[i]);
                if (!split[i]) continue;
                const double tn = i + 1 < m ? ts[i + 1] : ts[0] + Tc;
                const double tm = 0.5 * (ts[i] + tn);
                // the clock inverts theta to about 1e-15; finer steps only add noise
                if (tn - ts[i] < 1e-13 * Tc) continue;
                // a midpoint of the closing segment past Tc goes first
                const bool wrap = tm >= Tc;
                const auto [s, sigma] = state_at(wrap ? tm - Tc : tm);
                const Vec2 qm = earth_frame(s.lambda, sigma);
                if (dist(qm, qs[i]) == 0 || dist(qm, qs[(i + 1) % m]) == 0) continue;
                ++added;
                if (wrap) {
                    t2.insert(t2.begin(), tm - Tc);
                    s2.insert(s2.begin(), s);
                    q2.insert(q2.begin(), qm);
                    p2.insert(p2.begin(), momentum(s, sigma));
                    continue;
                }
                t2.push_back(tm);
                s2.push_back(s);
                q2.push_back(qm);
                p2.push_back(momentum(s, sigma));
            }
            ts.swap(t2);
            states.swap(s2);
            qs.swap(q2);
            ps.swap(p2);
            return added;
        };
        // thin tori turn sharply at the nu brakes; bisect until each vertex turns by < 0.02 rad
        for (int pass = 0; pass < 64; ++pass) {
            const std::size_t m = ts.size();
            std::vector<bool> split(m, false);
            bool any = false;
            for (std::size_t i = 0; i < m; ++i) {
                const std::size_t a = (i + m - 1) % m, b = (i + 1) % m;
                if (std::abs(turn_angle(qs[i] - qs[a], qs[b] - qs[i])) > 0.02) {
                    split[a] = split[i] = true;
                    any = true;
                }
            }
            if (!any) break;
            split_marked(split);
        }
        // Near-collision passes of thin tori run almost on top of their
        // mirror images. Refine branches closer than a few chord sags until
        // the polyline separates them. Distinguished orbits retrace
        // themselves, so this is for generic ones only.
        if (params.kind == OrbitKind::Generic) {
            bool resolved = false;
            for (int pass = 0; pass < 64 && !resolved; ++pass) {
                auto split = close_branch_segments(qs);
                resolved = std::none_of(split.begin(), split.end(), [](bool b) { return b; });
                if (!resolved && split_marked(split) == 0) break;
            }
            if (!resolved)
                throw Error(ErrorCode::GenericityFailure,
                            "nearly parallel branches closer than the time grid can resolve (torus too thin)");
        }
    }
    orb.states = std::move(states);
    orb.momenta = std::move(ps);
    const auto [s_end, sigma_end] = state_at(ts.front() + Tc);
    const Vec2 q_end = earth_frame(s_end.lambda, sigma_end);
    orb.curve = ClosedCurve(std::move(ts), std::move(qs), Tc);
    orb.closure_error = dist(q_end, orb.curve.point(0)) / orb.curve.diameter();
    if (orb.closure_error > 1e-6) {
        std::ostringstream msg;
        msg << "orbit closure error " << orb.closure_error << " of the diameter";
        throw Error(ErrorCode::ClosureFailure, msg.str());
    }

    if (params.kind != OrbitKind::Generic) {
        const double span = params.kind == OrbitKind::BrakeCollision ? orb.T / 4 : orb.T / 2;
        const std::size_t m = static_cast<std::size_t>(std::llround(static_cast<double>(n) * span / Tc));
        // interior samples off the symmetric times, so that crossings on
        // the axis do not fall on a shared vertex
        auto arc_point = [&](double tau) {
            const auto [s, sigma] = state_at(tau);
            return earth_frame(s.lambda, sigma);
        };
        std::vector<double> at{0.0};
        for (std::size_t i = 0; i < m; ++i) at.push_back(span * (static_cast<double>(i) + 0.3819660112501051) / static_cast<double>(m));
        at.push_back(span);
        std::vector<Vec2> arc;
        for (double tau : at) arc.push_back(arc_point(tau));
        // same turn-angle bisection as the closed curve; the ends are the
        // reversal points themselves and never split
        for (int pass = 0; pass < 64; ++pass) {
            const std::size_t m2 = arc.size();
            std::vector<bool> split(m2, false);
            bool any = false;
            for (std::size_t i = 1; i + 1 < m2; ++i)
                if (std::abs(turn_angle(arc[i] - arc[i - 1], arc[i + 1] - arc[i])) > 0.02) split[i - 1] = split[i] = any = true;
            if (!any) break;
            std::vector<double> a2;
            std::vector<Vec2> q2;
            std::size_t added = 0;
            for (std::size_t i = 0; i < m2; ++i) {
                a2.push_back(at[i]);
                q2.push_back(arc[i]);
                if (!split[i] || at[i + 1] - at[i] < 1e-13 * span) continue;
                const double tm = 0.5 * (at[i] + at[i + 1]);
                const Vec2 qm = arc_point(tm);
                if (dist(qm, arc[i]) == 0 || dist(qm, arc[i + 1]) == 0) continue;
                a2.push_back(tm);
                q2.push_back(qm);
                ++added;
            }
            at.swap(a2);
            arc.swap(q2);
            if (added == 0) break;
        }
        orb.reversal_arc = std::move(arc);
    }
    return orb;
}

double ConservationDrift::max() const { return std::max({k_lambda, k_nu, H, G}); }

ConservationDrift conservation_drift(const EulerOrbit& orbit) {
    const auto& e = orbit.params.euler;
    ConservationDrift d;
    const double sg = std::max(1.0, std::abs(e.g)), sc = std::max(1.0, std::abs(e.c));
    for (std::size_t i = 0; i < orbit.states.size(); ++i) {
        const auto& s = orbit.states[i];
        d.k_lambda = std::max(d.k_lambda, std::abs(k_lambda(s, e.c) - e.g) / sg);
        d.k_nu = std::max(d.k_nu, std::abs(k_nu(s, e.c, e.mu) + e.g) / sg);
        const Vec2 q = orbit.curve.point(i);
        if (norm(q) < 1e-6 || dist(q, kMoon) < 1e-6) continue;
        const Vec2 p = i < orbit.momenta.size() ? orbit.momenta[i] : to_cartesian(s).p;
        const auto I = euler_integrals(q, p, e.mu);
        d.H = std::max(d.H, std::abs(I.H - e.c) / sc);
        d.G = std::max(d.G, std::abs(I.G - e.g) / sg);
    }
    return d;
}

AxisCounts axis_crossing_counts(const EulerOrbit& orbit) {
    const auto& q = orbit.curve.points();
    const std::size_t n = q.size();
    // collision samples are placed exactly; near-collision passes of thin
    // tori come within ~1e-11, so the tolerance stays well below that
    const double tol = 1e-13 * orbit.curve.diameter();
    AxisCounts c;
    std::vector<bool> at_collision(n);
    for (std::size_t i = 0; i < n; ++i) at_collision[i] = norm(q[i]) <= tol;
    for (std::size_t i = 0; i < n; ++i) {
        if (at_collision[i]) {
            // refinement leaves runs of samples at one collision
            if (!at_collision[(i + n - 1) % n]) {
                ++c.positive;
                ++c.negative;
            }
            continue;
        }
        const std::size_t j = (i + 1) % n;
        if (at_collision[j]) continue;
        const Vec2 a = q[i], b = q[j];
        if ((a.y >= 0) == (b.y >= 0)) continue;
        const double f = a.y / (a.y - b.y);
        const double x = a.x + f * (b.x - a.x);
        const Vec2 d = b - a;
        if (std::abs(d.y) < 1e-6 * norm(d))
            throw Error(ErrorCode::TangentialCrossing, "orbit touches the symmetry axis tangentially");
        if (x > 0)
            ++c.positive;
        else
            ++c.negative;
    }
    c.positive *= orbit.traversals;
    c.negative *= orbit.traversals;
    return c;
}

AxisCounts cycle_counts(const EulerOrbit& orbit) {
    const auto& s = orbit.states;
    const std::size_t n = s.size();
    int zl = 0, zn = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = s[i];
        const auto& b = s[(i + 1) % n];
        // over half a period the curve closes on the deck image (-lambda, -sigma)
        const bool flip = i + 1 == n && orbit.traversals == 2;
        if ((a.lambda >= 0) != ((b.lambda >= 0) != flip)) ++zl;
        // sign of nu - pi, read off sin(nu) = -sin(sigma)
        if ((std::sin(a.nu) <= 0) != ((std::sin(b.nu) <= 0) != flip)) ++zn;
    }
    return {zl * orbit.traversals / 2, zn * orbit.traversals / 2};
}

int quadruple_count_formula(int k, int l, OrbitKind kind) {
    require_resonance(k, l);
    require_kind_available(k, l, kind);
    switch (kind) {
        case OrbitKind::BrakeBrake: return (k - 1) * (l - 1) + (k + l - 1) / 2;
        case OrbitKind::BrakeCollision: return (k - 1) * (l - 1) / 4;
        default:
            throw Error(ErrorCode::KindUnavailable,
                        "quadruple counts are known for brake-brake and brake-collision orbits only");
    }
}

InvariantPair euler_invariants_formula(int k, int l) {
    require_resonance(k, l);
    const std::int64_t K = k, L = l;
    InvariantPair r;
    if ((K + L) % 2 == 1)
        r.j1 = HalfInteger::from_int(2 * K * L - K - L + 1);
    else
        r.j1 = HalfInteger::from_twice(K * L - K - L + 2);
    r.j2 = static_cast<int>(K * L - K - L + 1);
    return r;
}

DistinguishedInvariants distinguished_invariants(OrbitKind kind, int N) {
    if (N < 0) throw Error(ErrorCode::InvalidInput, "quadruple point count must be nonnegative");
    switch (kind) {
        case OrbitKind::BrakeBrake: return {HalfInteger::from_int(2L * N), std::nullopt};
        case OrbitKind::BrakeCollision: return {HalfInteger::from_twice(4L * N + 1), 4 * N};
        default:
            throw Error(ErrorCode::Unsupported,
                        "no quadruple-point formula for " + to_string(kind) + " orbits; use a generic member");
    }
}

double euler_potential(Vec2 q, double mu) { return -(1 - mu) / norm(q) - mu / dist(q, kMoon); }

}  // namespace torusinv
