#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "torusinv/correspondence.hpp"
#include "torusinv/crossings.hpp"
#include "torusinv/curve.hpp"
#include "torusinv/errors.hpp"
#include "torusinv/invariants.hpp"
#include "torusinv/kepler.hpp"

namespace torusinv {

inline constexpr int kReportSchema = 1;

// NaN and infinities become null
nlohmann::json finite_or_null(double v);

nlohmann::json to_json(HalfInteger h);  // number, exact in binary
nlohmann::json to_json(const InvariantPair& p);
nlohmann::json to_json(const InvariantReport& r);
nlohmann::json to_json(const AgreementReport& r);
nlohmann::json to_json(const TorusKnotType& t);

struct ReportChecks {
    double energy_drift = 0.0;
    double closure_error = 0.0;
    double min_crossing_angle = 0.0;
};

// {schema, inputs, invariants, formulas, checks, match} plus the flat
// j1/j2 _geometric and _formula fields.
nlohmann::json invariant_report_json(const nlohmann::json& inputs, const InvariantReport& geometric,
                                     const InvariantPair& formula, const ReportChecks& checks);

// {schema, error:{code, message}}
nlohmann::json error_json(ErrorCode code, const std::string& message);

struct HillContour {
    double mu = 0.25;
    double c = -2.0;
};

struct SvgOptions {
    std::vector<Vec2> primaries;
    std::optional<HillContour> hill;  // dashed zero-velocity curve
    std::vector<Vec2> crossings;
    std::string title;
};

// SVG 1.1, fixed 1000x1000 viewBox, y up.
std::string render_svg(const ClosedCurve& curve, const SvgOptions& opts);

// Segments of the level set f = 0 on a grid over [lo, hi]; NaN values are skipped.
struct Segment {
    Vec2 a, b;
};
std::vector<Segment> marching_squares(const std::function<double(Vec2)>& f, Vec2 lo, Vec2 hi, int nx, int ny);

}  // namespace torusinv
