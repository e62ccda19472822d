#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "torusinv/correspondence.hpp"
#include "torusinv/errors.hpp"
#include "torusinv/euler.hpp"
#include "torusinv/kepler.hpp"
#include "torusinv/pipeline.hpp"
#include "torusinv/report.hpp"

namespace torusinv::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int exit_code(ErrorCode c) {
    switch (c) {
        case ErrorCode::KindUnavailable: return kUnavailable;
        case ErrorCode::Disagreement: return kMismatch;
        case ErrorCode::NonConvergence:
        case ErrorCode::QuadratureFailure:
        case ErrorCode::ClosureFailure:
        case ErrorCode::AmbiguousClustering:
        case ErrorCode::ResolutionLimit:
        case ErrorCode::Unsupported: return kInternal;
        default: return kInvalid;
    }
}

std::string hint(ErrorCode c) {
    switch (c) {
        case ErrorCode::GenericityFailure:
        case ErrorCode::NearTangency:
        case ErrorCode::NonImmersion:
        case ErrorCode::BranchDiscontinuity:
            return "retry with more --samples, another --phase, or a member farther from collision (lower --ecc)";
        case ErrorCode::ResonanceOutOfRange: return "choose another --energy or mass ratio";
        case ErrorCode::ResolutionLimit: return "this torus passes too close to the Earth for double precision; try another energy or a lower resonance";
        case ErrorCode::KindUnavailable: return "brake-brake and collision-collision need k+l odd; brake-collision needs k+l even";
        default: return {};
    }
}

std::optional<std::string> env(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

// relative paths land in TORUSINV_OUTPUT_DIR when it is set
fs::path resolve(const std::string& p) {
    fs::path path(p);
    if (path.is_relative())
        if (auto dir = env("TORUSINV_OUTPUT_DIR")) path = fs::path(*dir) / path;
    return path;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
    f << text;
}

void emit(const json& j, const std::string& path) {
    std::cout << j.dump(2) << "\n";
    if (!path.empty()) write_text(resolve(path), j.dump(2) + "\n");
}

void write_curve(const std::string& path, const ClosedCurve& curve, const std::string& comment) {
    if (path.empty()) return;
    const auto p = resolve(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    write_curve_csv_file(p.string(), curve, comment);
}

std::vector<Vec2> crossing_points(const ClosedCurve& curve) {
    CrossingOptions co;
    co.strict = false;
    std::vector<Vec2> out;
    for (const auto& c : find_crossings(curve, co)) out.push_back(c.point);
    return out;
}

KeplerSense parse_sense(const std::string& s) {
    if (s == "positive") return KeplerSense::Positive;
    if (s == "negative") return KeplerSense::Negative;
    throw Error(ErrorCode::InvalidInput, "sense must be positive or negative, got " + s);
}

OrbitKind parse_kind(const std::string& s) {
    auto k = parse_orbit_kind(s);
    if (!k) throw Error(ErrorCode::InvalidInput, "unknown orbit kind " + s);
    return *k;
}

json torus_json(const EulerTorusParams& t, const EulerOrbit& o) {
    return {{"mu", t.euler.mu},
            {"c", t.euler.c},
            {"g", t.euler.g},
            {"dc", finite_or_null(t.euler.dc)},
            {"dg", finite_or_null(t.euler.dg)},
            {"region", to_string(t.euler.region)},
            {"k", t.k},
            {"l", t.l},
            {"kind", to_string(t.kind)},
            {"T_lambda", o.T_lambda},
            {"T_nu", o.T_nu},
            {"T", o.T},
            {"traversals", o.traversals}};
}

struct RkpCase {
    json report;
    bool match = false;
    InvariantReport inv;
};

RkpCase rkp_case(const RkpTorusParams& p, std::size_t samples, const Outputs& out,
                 std::optional<GenericityThresholds> thr = std::nullopt) {
    RunOptions opts;
    opts.samples = samples;
    opts.thresholds = thr;
    const auto run = run_rkp(p, opts);
    json inputs{{"system", "rkp"},
                {"k", p.k},
                {"l", p.l},
                {"eccentricity", p.eccentricity},
                {"phase", p.phase},
                {"sense", p.sense == KeplerSense::Positive ? "positive" : "negative"},
                {"samples", run.samples}};
    auto j = invariant_report_json(inputs, run.report, run.formula,
                                   {run.drift, run.closure_error, run.report.min_crossing_angle});
    j["knot"] = to_json(knot_type(System::RKP, p.k, p.l));
    write_curve(out.csv, run.curve, "rkp k=" + std::to_string(p.k) + " l=" + std::to_string(p.l));
    if (!out.svg.empty()) {
        SvgOptions so;
        so.primaries = {{0, 0}};
        so.crossings = crossing_points(run.curve);
        so.title = "RKP (" + std::to_string(p.k) + "," + std::to_string(p.l) + ")";
        write_text(resolve(out.svg), render_svg(run.curve, so));
    }
    return {j, run.match(), run.report};
}

void euler_svg(const std::string& path, const EulerOrbit& o, const std::vector<Vec2>& marks) {
    if (path.empty()) return;
    SvgOptions so;
    so.primaries = {{0, 0}, {1, 0}};
    so.hill = HillContour{o.params.euler.mu, o.params.euler.c};
    so.crossings = marks;
    so.title = "Euler (" + std::to_string(o.params.k) + "," + std::to_string(o.params.l) + ") " + to_string(o.params.kind);
    write_text(resolve(path), render_svg(o.curve, so));
}

struct EulerCase {
    json report;
    bool match = false;
    InvariantReport inv;
};

EulerCase euler_case(double mu, int k, int l, std::optional<double> c, OrbitKind kind, std::vector<double> phases,
                     std::size_t samples, const Outputs& out, std::optional<GenericityThresholds> thr = std::nullopt) {
    require_resonance(k, l);
    require_kind_available(k, l, kind);
    RunOptions opts;
    opts.samples = samples;
    opts.thresholds = thr;
    const auto gen = run_euler_generic(mu, k, l, c, phases, opts);
    json inputs{{"system", "euler"}, {"mu", mu},          {"k", k},
                {"l", l},            {"c", gen.params.euler.c}, {"kind", to_string(kind)},
                {"phases_tried", gen.phases_tried},     {"samples", gen.samples}};
    auto j = invariant_report_json(inputs, gen.report, gen.formula,
                                   {gen.drift.max(), gen.orbit.closure_error, gen.report.min_crossing_angle});
    j["torus"] = torus_json(gen.params, gen.orbit);
    j["torus"]["phase"] = gen.params.phase;
    j["knot"] = to_json(knot_type(System::Euler, k, l));
    const auto cyc = cycle_counts(gen.orbit);
    j["cycle_counts"] = {{"lambda", cyc.positive}, {"nu", cyc.negative}};
    bool match = gen.match();
    if (kind == OrbitKind::Generic) {
        write_curve(out.csv, gen.orbit.curve, "euler generic");
        euler_svg(out.svg, gen.orbit, crossing_points(gen.orbit.curve));
        return {j, match, gen.report};
    }
    const auto d = run_euler_distinguished(mu, k, l, c, kind, opts);
    json mult = json::array();
    for (const auto& m : d.clusters) mult.push_back(m.multiplicity);
    const bool j1_ok = !d.predicted || d.predicted->j1 == gen.report.j1;
    const bool j2_ok = !d.predicted || !d.predicted->j2 || *d.predicted->j2 == gen.report.j2;
    const auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
    j["distinguished"] = {{"kind", to_string(kind)},
                          {"quadruple_clusters", d.clusters.size()},
                          {"quadruple_formula", opt(d.quadruple_formula)},
                          {"multiplicities", mult},
                          {"quadruple_match", d.match()},
                          {"j1_predicted", d.predicted ? to_json(d.predicted->j1) : json(nullptr)},
                          {"j2_predicted", d.predicted ? opt(d.predicted->j2) : json(nullptr)},
                          {"generic_cross_check", j1_ok && j2_ok},
                          {"axis_crossings", {{"positive", d.axis.positive}, {"negative", d.axis.negative}}},
                          {"cycle_counts", {{"lambda", d.cycles.positive}, {"nu", d.cycles.negative}}},
                          {"closure_error", d.orbit.closure_error}};
    j["quadruple_clusters"] = d.clusters.size();
    j["formula"] = opt(d.quadruple_formula);
    match = match && d.match() && j1_ok && j2_ok;
    j["match"] = match;
    write_curve(out.csv, d.orbit.curve, "euler " + to_string(kind));
    std::vector<Vec2> marks;
    for (const auto& m : d.clusters) marks.push_back(m.point);
    euler_svg(out.svg, d.orbit, marks);
    return {j, match, gen.report};
}

}  // namespace

int guarded(const std::string& json_path, int (*f)(const void*), const void* args) {
    try {
        return f(args);
    } catch (const Error& e) {
        auto j = error_json(e.code(), e.what());
        if (auto h = hint(e.code()); !h.empty()) j["hint"] = h;
        try {
            emit(j, json_path);
        } catch (...) {
            std::cout << j.dump(2) << "\n";
        }
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cout << error_json(ErrorCode::Unsupported, std::string("internal error: ") + e.what()).dump(2) << "\n";
        return kInternal;
    }
}

int cmd_rkp(const RkpArgs& a) {
    RkpTorusParams p;
    p.k = a.k;
    p.l = a.l;
    p.eccentricity = a.ecc;
    p.phase = a.phase;
    p.sense = parse_sense(a.sense);
    validate(p);
    const auto r = rkp_case(p, a.samples, a.out);
    emit(r.report, a.out.json);
    return r.match ? kOk : kMismatch;
}

int cmd_euler(const EulerArgs& a) {
    const auto kind = parse_kind(a.kind);
    require_resonance(a.k, a.l);
    require_kind_available(a.k, a.l, kind);
    const auto phases = a.phase ? std::vector<double>{*a.phase} : generic_phases(a.seed);
    auto r = euler_case(a.mu, a.k, a.l, a.energy, kind, phases, a.samples, a.out);
    r.report["inputs"]["seed"] = a.seed;
    emit(r.report, a.out.json);
    return r.match ? kOk : kMismatch;
}

int cmd_compare(const CompareArgs& a) {
    require_resonance(a.k, a.l);
    const auto pair = matched_pair(a.k, a.l);
    AgreementReport rep;
    json inputs{{"k", a.k}, {"l", a.l}};
    if (a.mu) {
        inputs["mu"] = *a.mu;
        inputs["eccentricity"] = a.ecc;
        inputs["seed"] = a.seed;
        RkpTorusParams p;
        p.k = a.k;
        p.l = a.l;
        p.eccentricity = a.ecc;
        const auto rk = rkp_case(p, 0, {});
        const auto eu = euler_case(*a.mu, pair.first, pair.second, std::nullopt, OrbitKind::Generic,
                                   generic_phases(a.seed), 0, {});
        rep = verify_agreement(a.k, a.l, &rk.inv, &eu.inv);
    } else {
        rep = verify_agreement(a.k, a.l);
    }
    json j{{"schema", kReportSchema}, {"inputs", inputs}};
    j.update(to_json(rep));
    j["match"] = rep.agree();
    emit(j, a.json);
    return rep.agree() ? kOk : kMismatch;
}

namespace {

struct SweepCase {
    std::string system;
    int k = 0, l = 0;
    std::optional<double> mu, c, ecc;
    std::string kind = "generic";
    std::size_t samples = 0;
};

void validate_case(const SweepCase& s) {
    require_resonance(s.k, s.l);
    if (s.system == "rkp") {
        RkpTorusParams p;
        p.k = s.k;
        p.l = s.l;
        p.eccentricity = s.ecc.value_or(0.5);
        validate(p);
    } else if (s.system == "euler") {
        const double mu = s.mu.value_or(0.25);
        if (!(mu > 0 && mu < 1)) throw Error(ErrorCode::InvalidInput, "mass ratio must lie in (0, 1)");
        require_kind_available(s.k, s.l, parse_kind(s.kind));
    } else {
        throw Error(ErrorCode::InvalidInput, "unknown system " + s.system);
    }
}

std::vector<SweepCase> grid_cases(const std::string& which) {
    if (which != "rkp" && which != "euler" && which != "all")
        throw Error(ErrorCode::InvalidInput, "grid must be rkp, euler or all");
    std::vector<SweepCase> out;
    for (int k = 2; k <= 9; ++k)
        for (int l = 1; l < k; ++l) {
            if (std::gcd(k, l) != 1) continue;
            if (which != "euler")
                for (double e : {0.2, 0.5, 0.8}) out.push_back({"rkp", k, l, std::nullopt, std::nullopt, e});
            if (which != "rkp")
                for (double mu : {0.1, 0.25, 0.5}) out.push_back({"euler", k, l, mu});
        }
    return out;
}

}  // namespace

int cmd_sweep(const SweepArgs& a) {
    std::vector<SweepCase> cases;
    std::string out_dir = "sweep_out";
    std::optional<GenericityThresholds> rkp_thr, euler_thr;
    std::uint64_t seed = a.seed;
    if (!a.config.empty()) {
        std::ifstream f(a.config);
        if (!f) throw Error(ErrorCode::InvalidInput, "cannot read config " + a.config);
        json cfg;
        try {
            cfg = json::parse(f);
            for (const auto& c : cfg.at("cases")) {
                SweepCase s;
                s.system = c.at("system").get<std::string>();
                s.k = c.at("k").get<int>();
                s.l = c.at("l").get<int>();
                if (c.contains("mu")) s.mu = c["mu"].get<double>();
                if (c.contains("c")) s.c = c["c"].get<double>();
                if (c.contains("eccentricity")) s.ecc = c["eccentricity"].get<double>();
                if (c.contains("kind")) s.kind = c["kind"].get<std::string>();
                if (c.contains("samples")) s.samples = c["samples"].get<std::size_t>();
                cases.push_back(s);
            }
            if (cfg.contains("output_dir")) out_dir = cfg["output_dir"].get<std::string>();
            if (cfg.contains("seed")) seed = cfg["seed"].get<std::uint64_t>();
            if (cfg.contains("thresholds")) {
                const auto& t = cfg["thresholds"];
                GenericityThresholds g{t.value("min_angle", 1e-3), t.value("min_param_gap_fraction", 1e-4)};
                rkp_thr = g;
                euler_thr = GenericityThresholds{t.value("euler_min_angle", g.min_angle), g.min_param_gap_fraction};
            }
        } catch (const json::exception& e) {
            throw Error(ErrorCode::InvalidInput, std::string("bad config: ") + e.what());
        }
    } else if (!a.grid.empty()) {
        cases = grid_cases(a.grid);
    } else {
        throw Error(ErrorCode::InvalidInput, "sweep needs --config or --grid");
    }
    for (std::size_t i = 0; i < cases.size(); ++i) {
        try {
            validate_case(cases[i]);
        } catch (const Error& e) {
            throw Error(e.code(), "case " + std::to_string(i) + ": " + e.what());
        }
    }
    if (auto d = env("TORUSINV_OUTPUT_DIR")) out_dir = *d;
    if (!a.output_dir.empty()) out_dir = a.output_dir;
    int threads = a.threads;
    if (threads <= 0)
        if (auto t = env("TORUSINV_THREADS")) threads = std::atoi(t->c_str());
    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    fs::create_directories(out_dir);

    struct Result {
        json row;
        bool match = false;
    };
    std::vector<Result> results(cases.size());
    std::atomic<std::size_t> next{0};
    std::mutex write_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < cases.size(); i = next++) {
            const auto& s = cases[i];
            json row{{"case", i}, {"system", s.system}, {"k", s.k}, {"l", s.l}};
            json report;
            bool match = false;
            try {
                if (s.system == "rkp") {
                    RkpTorusParams p;
                    p.k = s.k;
                    p.l = s.l;
                    p.eccentricity = s.ecc.value_or(0.5);
                    row["eccentricity"] = p.eccentricity;
                    auto r = rkp_case(p, s.samples, {}, rkp_thr);
                    report = r.report;
                    match = r.match;
                } else {
                    const double mu = s.mu.value_or(0.25);
                    row["mu"] = mu;
                    auto r = euler_case(mu, s.k, s.l, s.c, parse_kind(s.kind), generic_phases(seed), s.samples, {},
                                        euler_thr);
                    report = r.report;
                    match = r.match;
                }
                row["j1"] = report["invariants"]["j1"];
                row["j2"] = report["invariants"]["j2"];
                row["j1_formula"] = report["formulas"]["j1"];
                row["j2_formula"] = report["formulas"]["j2"];
            } catch (const Error& e) {
                report = error_json(e.code(), e.what());
                row["error"] = report["error"];
                // keep the expected values in the table even when the run failed
                try {
                    if (s.system == "rkp" || parse_kind(s.kind) == OrbitKind::Generic) {
                        const auto f = s.system == "rkp" ? rkp_invariants_formula(s.k, s.l)
                                                         : euler_invariants_formula(s.k, s.l);
                        row["j1_formula"] = to_json(f.j1);
                        row["j2_formula"] = f.j2;
                    }
                } catch (const Error&) {
                }
            }
            row["match"] = match;
            {
                std::lock_guard<std::mutex> lock(write_mutex);
                std::ostringstream name;
                name << "case_" << std::setw(3) << std::setfill('0') << i << "_" << s.system << "_" << s.k << "_" << s.l
                     << ".json";
                write_text(fs::path(out_dir) / name.str(), report.dump(2) + "\n");
            }
            results[i] = {row, match};
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min<int>(threads, static_cast<int>(cases.size())); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::ostringstream csv;
    csv << "k,l,system,mu,eccentricity,j1,j2,j1_formula,j2_formula,match\n";
    std::size_t matched = 0;
    json first_failure = nullptr;
    for (const auto& r : results) {
        const auto& w = r.row;
        auto field = [&](const char* key) { return w.contains(key) ? w[key].dump() : std::string(); };
        csv << w["k"] << "," << w["l"] << "," << w["system"].get<std::string>() << "," << field("mu") << ","
            << field("eccentricity") << "," << field("j1") << "," << field("j2") << "," << field("j1_formula") << ","
            << field("j2_formula") << "," << (r.match ? "true" : "false") << "\n";
        if (r.match)
            ++matched;
        else if (first_failure.is_null())
            first_failure = w;
    }
    write_text(fs::path(out_dir) / "sweep.csv", csv.str());
    json summary{{"schema", kReportSchema},
                 {"cases", cases.size()},
                 {"matched", matched},
                 {"first_failure", first_failure},
                 {"output_dir", out_dir},
                 {"match", matched == cases.size()}};
    write_text(fs::path(out_dir) / "sweep.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    return matched == cases.size() ? kOk : kMismatch;
}

int cmd_invariants(const InvariantsArgs& a) {
    const auto curve = read_curve_csv_file(a.curve);
    const auto rep = compute_invariants(curve, {a.cx, a.cy}, {a.min_angle, 1e-4});
    json j{{"schema", kReportSchema},
           {"inputs", {{"curve", a.curve}, {"center", {a.cx, a.cy}}, {"samples", curve.size()}}},
           {"invariants", to_json(rep)},
           {"checks",
            {{"min_crossing_angle", finite_or_null(rep.min_crossing_angle)},
             {"min_param_gap", finite_or_null(rep.min_param_gap)}}}};
    emit(j, a.json);
    return kOk;
}

}  // namespace torusinv::cli
