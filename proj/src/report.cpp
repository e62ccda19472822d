#include "torusinv/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "torusinv/euler.hpp"

namespace torusinv {

nlohmann::json finite_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

nlohmann::json to_json(HalfInteger h) {
    if (h.is_integer()) return h.twice / 2;
    return h.value();
}

nlohmann::json to_json(const InvariantPair& p) { return {{"j1", to_json(p.j1)}, {"j2", p.j2}}; }

nlohmann::json to_json(const InvariantReport& r) {
    return {{"turning", r.turning_number},
            {"w0", r.w0},
            {"n", r.n_double_points},
            {"jplus", r.jplus},
            {"j1", to_json(r.j1)},
            {"j2", r.j2},
            {"lift_n", r.lift_double_points}};
}

nlohmann::json to_json(const TorusKnotType& t) {
    return {{"p", t.p}, {"q", t.q}, {"contractible", t.contractible}};
}

nlohmann::json to_json(const AgreementReport& r) {
    nlohmann::json diffs = nlohmann::json::array();
    for (const auto& d : r.diffs) diffs.push_back({{"field", d.field}, {"expected", d.expected}, {"actual", d.actual}});
    nlohmann::json j{{"k", r.k},
                     {"l", r.l},
                     {"euler_pair", {r.euler_pair.first, r.euler_pair.second}},
                     {"rkp_formula", to_json(r.rkp_formula)},
                     {"euler_formula", to_json(r.euler_formula)},
                     {"rkp_knot", to_json(knot_type(System::RKP, r.k, r.l))},
                     {"euler_knot", to_json(knot_type(System::Euler, r.euler_pair.first, r.euler_pair.second))},
                     {"symbolic", r.symbolic},
                     {"numeric_checked", r.numeric_checked},
                     {"numeric", r.numeric_checked ? nlohmann::json(r.numeric) : nlohmann::json(nullptr)},
                     {"agreement", r.agree()},
                     {"diffs", diffs}};
    j["rkp_geometric"] = r.rkp_geometric ? to_json(*r.rkp_geometric) : nlohmann::json(nullptr);
    j["euler_geometric"] = r.euler_geometric ? to_json(*r.euler_geometric) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json invariant_report_json(const nlohmann::json& inputs, const InvariantReport& geometric,
                                     const InvariantPair& formula, const ReportChecks& checks) {
    const bool match = geometric.j1 == formula.j1 && geometric.j2 == formula.j2;
    return {{"schema", kReportSchema},
            {"inputs", inputs},
            {"invariants", to_json(geometric)},
            {"formulas", to_json(formula)},
            {"checks",
             {{"energy_drift", finite_or_null(checks.energy_drift)},
              {"closure_error", finite_or_null(checks.closure_error)},
              {"min_crossing_angle", finite_or_null(checks.min_crossing_angle)}}},
            {"j1_geometric", to_json(geometric.j1)},
            {"j1_formula", to_json(formula.j1)},
            {"j2_geometric", geometric.j2},
            {"j2_formula", formula.j2},
            {"match", match}};
}

nlohmann::json error_json(ErrorCode code, const std::string& message) {
    return {{"schema", kReportSchema}, {"error", {{"code", std::string(to_string(code))}, {"message", message}}}};
}

std::vector<Segment> marching_squares(const std::function<double(Vec2)>& f, Vec2 lo, Vec2 hi, int nx, int ny) {
    std::vector<double> v(static_cast<std::size_t>((nx + 1) * (ny + 1)));
    auto at = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(j * (nx + 1) + i)]; };
    auto pos = [&](int i, int j) {
        return Vec2{lo.x + (hi.x - lo.x) * i / nx, lo.y + (hi.y - lo.y) * j / ny};
    };
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) at(i, j) = f(pos(i, j));
    std::vector<Segment> out;
    auto edge_point = [&](Vec2 a, Vec2 b, double fa, double fb) { return a + (fa / (fa - fb)) * (b - a); };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const Vec2 p[4] = {pos(i, j), pos(i + 1, j), pos(i + 1, j + 1), pos(i, j + 1)};
            const double fv[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
            if (std::any_of(fv, fv + 4, [](double x) { return !std::isfinite(x); })) continue;
            std::vector<Vec2> hits;
            for (int e = 0; e < 4; ++e) {
                const int a = e, b = (e + 1) % 4;
                if ((fv[a] < 0) != (fv[b] < 0)) hits.push_back(edge_point(p[a], p[b], fv[a], fv[b]));
            }
            // saddle cells give four hits; pairing them in edge order is good enough for a plot
            for (std::size_t h = 0; h + 1 < hits.size(); h += 2) out.push_back({hits[h], hits[h + 1]});
        }
    }
    return out;
}

namespace {

std::string xml_escape(const std::string& in) {
    std::string out;
    for (char ch : in) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const ClosedCurve& curve, const SvgOptions& opts) {
    constexpr double kSize = 1000.0, kMargin = 40.0;
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
    for (const auto& q : curve.points()) {
        x0 = std::min(x0, q.x);
        x1 = std::max(x1, q.x);
        y0 = std::min(y0, q.y);
        y1 = std::max(y1, q.y);
    }
    const double span = std::max({x1 - x0, y1 - y0, 1e-300});
    const double scale = (kSize - 2 * kMargin) / span;
    const Vec2 mid{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
    auto to_view = [&](Vec2 q) { return Vec2{kSize / 2 + scale * (q.x - mid.x), kSize / 2 - scale * (q.y - mid.y)}; };
    auto in_view = [&](Vec2 v) { return v.x >= 0 && v.x <= kSize && v.y >= 0 && v.y <= kSize; };

    std::ostringstream s;
    s << std::setprecision(7);
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">\n"
      << "<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
    if (!opts.title.empty()) s << "<title>" << xml_escape(opts.title) << "</title>\n";
    if (opts.hill) {
        const double half = 0.5 * kSize / scale;
        const Vec2 lo{mid.x - half, mid.y - half}, hi{mid.x + half, mid.y + half};
        const auto hill = *opts.hill;
        const auto segs = marching_squares(
            [&](Vec2 q) {
                const double v = euler_potential(q, hill.mu);
                return std::isfinite(v) ? v - hill.c : std::numeric_limits<double>::quiet_NaN();
            },
            lo, hi, 250, 250);
        s << "<g stroke=\"#888888\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\" fill=\"none\">\n";
        for (const auto& g : segs) {
            const Vec2 a = to_view(g.a), b = to_view(g.b);
            s << "<line x1=\"" << a.x << "\" y1=\"" << a.y << "\" x2=\"" << b.x << "\" y2=\"" << b.y << "\"/>\n";
        }
        s << "</g>\n";
    }
    s << "<polygon fill=\"none\" stroke=\"#1f4e99\" stroke-width=\"1\" points=\"";
    for (const auto& q : curve.points()) {
        const Vec2 v = to_view(q);
        s << v.x << "," << v.y << " ";
    }
    s << "\"/>\n";
    for (const auto& c : opts.crossings) {
        const Vec2 v = to_view(c);
        s << "<circle cx=\"" << v.x << "\" cy=\"" << v.y << "\" r=\"5\" fill=\"none\" stroke=\"#cc3311\" stroke-width=\"1.5\"/>\n";
    }
    for (const auto& p : opts.primaries) {
        const Vec2 v = to_view(p);
        if (in_view(v)) s << "<circle cx=\"" << v.x << "\" cy=\"" << v.y << "\" r=\"6\" fill=\"black\"/>\n";
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace torusinv
