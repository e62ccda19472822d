// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// --expect-red lists criteria known to fail; the exit status is 0 iff the
// failing set is exactly that list, so a fix or a new failure both show up.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "torusinv/correspondence.hpp"
#include "torusinv/crossings.hpp"
#include "torusinv/errors.hpp"
#include "torusinv/pipeline.hpp"
#include "torusinv/standard_curves.hpp"

using namespace torusinv;

namespace {

struct Outcome {
    bool pass = true;
    std::string summary;
    std::vector<std::string> notes;

    void fail(const std::string& note) {
        pass = false;
        notes.push_back(note);
    }
    void note(const std::string& n) { notes.push_back(n); }
};

template <class... T>
std::string str(const T&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    return os.str();
}

std::string code_str(ErrorCode c) { return std::string(to_string(c)); }

std::string pair_str(const InvariantPair& p) { return str("(", to_string(p.j1), ", ", p.j2, ")"); }

std::vector<std::pair<int, int>> coprime_pairs(int kmax) {
    std::vector<std::pair<int, int>> out;
    for (int k = 2; k <= kmax; ++k)
        for (int l = 1; l < k; ++l)
            if (std::gcd(k, l) == 1) out.push_back({k, l});
    return out;
}

const std::vector<double> kEcc{0.2, 0.5, 0.8};
const std::vector<double> kMu{0.1, 0.25, 0.5};

// Results shared between criteria; computed once.
struct RkpResult {
    int k, l;
    double e;
    std::optional<RkpRun> run;
    std::string error;
    ErrorCode code = ErrorCode::InvalidInput;
};

struct EulerResult {
    int k, l;
    double mu;
    std::optional<double> c;  // nullopt: default energy
    std::optional<EulerRun> run;
    std::string error;
    ErrorCode code = ErrorCode::InvalidInput;
};

struct DistResult {
    int k, l;
    OrbitKind kind;
    std::optional<DistinguishedRun> run;
    std::string error;
};

RkpResult rkp_case(int k, int l, double e) {
    RkpResult r{k, l, e, std::nullopt, {}, ErrorCode::InvalidInput};
    RkpTorusParams p;
    p.k = k;
    p.l = l;
    p.eccentricity = e;
    try {
        r.run = run_rkp(p);
    } catch (const Error& err) {
        r.error = err.what();
        r.code = err.code();
    }
    return r;
}

EulerResult euler_case(int k, int l, double mu, std::optional<double> c = std::nullopt) {
    EulerResult r{k, l, mu, c, std::nullopt, {}, ErrorCode::InvalidInput};
    try {
        r.run = run_euler_generic(mu, k, l, c, generic_phases(1));
    } catch (const Error& err) {
        r.error = err.what();
        r.code = err.code();
    }
    return r;
}

struct Shared {
    std::vector<RkpResult> rkp;
    std::vector<EulerResult> euler;        // grid, default energy
    std::vector<EulerResult> euler_c2;     // mu 0.25, second energy
    std::vector<EulerResult> partners;     // matched pairs beyond k = 9, mu 0.25
    std::vector<DistResult> dist;          // every available distinguished kind, mu 0.25

    const EulerResult* euler_at(int k, int l, double mu) const {
        for (const auto& r : euler)
            if (r.k == k && r.l == l && r.mu == mu) return &r;
        for (const auto& r : partners)
            if (r.k == k && r.l == l && r.mu == mu) return &r;
        return nullptr;
    }
    const DistResult* dist_of(int k, int l, OrbitKind kind) const {
        for (const auto& d : dist)
            if (d.k == k && d.l == l && d.kind == kind) return &d;
        return nullptr;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1 -------------------------------------------------------------------------
Outcome standard_curves() {
    Outcome o;
    const int want[] = {0, 0, -2, -4, -6, -8};
    std::string got;
    for (int j = 0; j <= 5; ++j) {
        const int J = jplus(standard_curve(j, 1200));
        got += (j ? ", " : "") + std::to_string(J);
        if (J != want[j]) o.fail(str("K", j, ": J+ = ", J, ", expected ", want[j]));
    }
    o.summary = "J+(K0..K5) = {" + got + "}";
    return o;
}

// 2 -------------------------------------------------------------------------
Outcome rkp_grid(const Shared& s) {
    Outcome o;
    int matched = 0, skipped = 0;
    for (const auto& r : s.rkp) {
        const auto tag = str("(", r.k, ",", r.l, ") e = ", r.e);
        if (!r.run) {
            if (r.code == ErrorCode::GenericityFailure || r.code == ErrorCode::NearTangency) {
                ++skipped;
                o.note("skipped non-generic member " + tag + ": " + r.error);
            } else {
                o.fail(tag + ": " + r.error);
            }
            continue;
        }
        if (r.run->match())
            ++matched;
        else
            o.fail(str(tag, ": geometric ", pair_str({r.run->report.j1, r.run->report.j2}), ", formula ",
                       pair_str(r.run->formula)));
    }
    auto spot = [&](int k, int l, InvariantPair want) {
        const auto f = rkp_invariants_formula(k, l);
        if (!(f.j1 == want.j1 && f.j2 == want.j2))
            o.fail(str("formula (", k, ",", l, ") = ", pair_str(f), ", expected ", pair_str(want)));
        for (const auto& r : s.rkp)
            if (r.k == k && r.l == l && r.run && !(r.run->report.j1 == want.j1 && r.run->report.j2 == want.j2))
                o.fail(str("spot (", k, ",", l, ") e = ", r.e, ": ", pair_str({r.run->report.j1, r.run->report.j2})));
    };
    spot(3, 2, {HalfInteger::from_twice(1), 0});
    spot(5, 1, {HalfInteger::from_int(8), 2});
    o.summary = str(matched, "/", s.rkp.size(), " cases match, ", skipped, " skipped; spot values (3,2) -> (1/2, 0), (5,1) -> (8, 2)");
    return o;
}

// 3 -------------------------------------------------------------------------
Outcome euler_grid(const Shared& s) {
    Outcome o;
    int matched = 0;
    std::map<std::string, int> by_code;
    for (const auto& r : s.euler) {
        const auto tag = str("(", r.k, ",", r.l, ") mu = ", r.mu);
        if (!r.run) {
            ++by_code[code_str(r.code)];
            o.fail(tag + ": " + code_str(r.code) + ": " + r.error);
            continue;
        }
        if (r.run->match())
            ++matched;
        else
            o.fail(str(tag, ": geometric ", pair_str({r.run->report.j1, r.run->report.j2}), ", formula ",
                       pair_str(r.run->formula)));
    }
    // mu independence among the runs that completed
    for (const auto& [k, l] : coprime_pairs(9)) {
        std::optional<InvariantPair> first;
        for (double mu : kMu) {
            const auto* r = s.euler_at(k, l, mu);
            if (!r || !r->run) continue;
            const InvariantPair p{r->run->report.j1, r->run->report.j2};
            if (!first)
                first = p;
            else if (!(first->j1 == p.j1 && first->j2 == p.j2))
                o.fail(str("(", k, ",", l, ") depends on mu: ", pair_str(*first), " vs ", pair_str(p)));
        }
    }
    int c_matched = 0;
    for (const auto& r : s.euler_c2) {
        const auto* base = s.euler_at(r.k, r.l, 0.25);
        const auto tag = str("(", r.k, ",", r.l, ") mu = 0.25 at c = ", *r.c);
        if (!r.run) {
            o.fail(tag + ": " + code_str(r.code) + ": " + r.error);
            if (r.code == ErrorCode::InvalidInput)
                o.note(str("    the whole energy window of (", r.k, ",", r.l, ") lies within ",
                           default_energy(0.25, r.k, r.l).dc, " of c1, below the spacing of doubles there"));
            continue;
        }
        if (!r.run->match()) {
            o.fail(str(tag, ": geometric ", pair_str({r.run->report.j1, r.run->report.j2})));
            continue;
        }
        if (base && base->run &&
            !(base->run->report.j1 == r.run->report.j1 && base->run->report.j2 == r.run->report.j2)) {
            o.fail(tag + ": differs from the default energy");
            continue;
        }
        ++c_matched;
    }
    std::string codes;
    for (const auto& [c, n] : by_code) codes += str(", ", n, " ", c);
    o.summary = str(matched, "/", s.euler.size(), " grid cases match", codes, "; second energy ", c_matched, "/",
                    s.euler_c2.size());
    if (!by_code.empty())
        o.note(str("lambda_max of the refused tori is below ", kMinLambdaMax,
                   ": their near-collision passes are not separable in double precision, so the run is refused "
                   "rather than reporting noise (see README, known limitations)"));
    return o;
}

// 4 and 5 --------------------------------------------------------------------
struct DistCase {
    int k, l;
    OrbitKind kind;
    int quadruples;
};
const DistCase kDistCases[] = {{4, 3, OrbitKind::BrakeBrake, 9},
                               {5, 2, OrbitKind::BrakeBrake, 7},
                               {5, 3, OrbitKind::BrakeCollision, 2}};

Outcome quadruple_counts(const Shared& s) {
    Outcome o;
    std::string got;
    for (const auto& c : kDistCases) {
        const auto* d = s.dist_of(c.k, c.l, c.kind);
        const auto tag = str(to_string(c.kind), " (", c.k, ",", c.l, ")");
        if (!d || !d->run) {
            o.fail(tag + ": " + (d ? d->error : "not run"));
            continue;
        }
        const auto& r = *d->run;
        got += str(got.empty() ? "" : ", ", tag, " -> ", r.clusters.size());
        if (static_cast<int>(r.clusters.size()) != c.quadruples)
            o.fail(str(tag, ": ", r.clusters.size(), " clusters, expected ", c.quadruples));
        if (quadruple_count_formula(c.k, c.l, c.kind) != c.quadruples)
            o.fail(str(tag, ": count formula gives ", quadruple_count_formula(c.k, c.l, c.kind)));
        for (const auto& m : r.clusters)
            if (m.multiplicity != 4) o.fail(str(tag, ": cluster of multiplicity ", m.multiplicity));
    }
    o.summary = got + ", every multiplicity 4";
    return o;
}

Outcome distinguished_formulas(const Shared& s) {
    Outcome o;
    struct Want {
        int k, l;
        OrbitKind kind;
        HalfInteger j1;
        std::optional<int> j2;
    };
    const Want wants[] = {{4, 3, OrbitKind::BrakeBrake, HalfInteger::from_int(18), std::nullopt},
                          {5, 3, OrbitKind::BrakeCollision, HalfInteger::from_twice(9), 8}};
    std::string got;
    for (const auto& w : wants) {
        const auto tag = str(to_string(w.kind), " (", w.k, ",", w.l, ")");
        const auto* d = s.dist_of(w.k, w.l, w.kind);
        if (!d || !d->run || !d->run->predicted) {
            o.fail(tag + ": " + (d ? d->error : "not run"));
            continue;
        }
        const auto& p = *d->run->predicted;
        got += str(got.empty() ? "" : "; ", tag, ": N = ", d->run->clusters.size(), ", J1 = ", to_string(p.j1));
        if (p.j2) got += str(", J2 = ", *p.j2);
        if (p.j1 != w.j1) o.fail(str(tag, ": J1 from N is ", to_string(p.j1), ", expected ", to_string(w.j1)));
        if (w.j2 && p.j2 != w.j2) o.fail(str(tag, ": J2 from N is ", p.j2.value_or(-1), ", expected ", *w.j2));
        // the generic members of the same torus family, at every mu
        for (double mu : kMu) {
            const auto* g = s.euler_at(w.k, w.l, mu);
            if (!g || !g->run) {
                o.fail(str(tag, ": no generic run at mu = ", mu));
                continue;
            }
            if (g->run->report.j1 != p.j1 || (p.j2 && g->run->report.j2 != *p.j2))
                o.fail(str(tag, ": generic member at mu = ", mu, " has ",
                           pair_str({g->run->report.j1, g->run->report.j2})));
        }
    }
    o.summary = got + "; generic members agree at every mu";
    return o;
}

// 6 -------------------------------------------------------------------------
Outcome agreement(const Shared& s, const std::string& cli) {
    Outcome o;
    int symbolic = 0, total = 0;
    for (const auto& [k, l] : coprime_pairs(12)) {
        ++total;
        const auto a = verify_agreement(k, l);
        if (a.symbolic)
            ++symbolic;
        else
            for (const auto& d : a.diffs) o.fail(str("(", k, ",", l, ") symbolic: ", d.field, " ", d.expected, " vs ", d.actual));
    }
    int numeric = 0, checked = 0;
    std::set<std::string> blocked;
    for (const auto& r : s.rkp) {
        if (!r.run) continue;
        const auto [ek, el] = matched_pair(r.k, r.l);
        for (double mu : kMu) {
            const auto* e = s.euler_at(ek, el, mu);
            if (!e) continue;  // partners beyond the grid were computed at mu 0.25 only
            ++checked;
            if (!e->run) {
                blocked.insert(str("RKP (", r.k, ",", r.l, ") -> Euler (", ek, ",", el, "): ", code_str(e->code)));
                o.pass = false;
                continue;
            }
            const auto a = verify_agreement(r.k, r.l, &r.run->report, &e->run->report);
            if (a.agree()) {
                ++numeric;
                continue;
            }
            for (const auto& d : a.diffs)
                o.fail(str("RKP (", r.k, ",", r.l, ") e = ", r.e, " vs Euler (", ek, ",", el, ") mu = ", mu, ": ", d.field,
                           " ", d.expected, " vs ", d.actual));
        }
    }
    for (const auto& b : blocked) o.note("no numeric partner: " + b);

    std::string sweep = "sweep not run (no --cli given)";
    if (!cli.empty()) {
        const auto dir = std::filesystem::temp_directory_path() / "torusinv_acceptance_sweep";
        std::filesystem::create_directories(dir);
        const auto cmd = str("'", cli, "' sweep --grid all --threads 1 --output-dir '", dir.string(), "' > '",
                             (dir / "stdout.json").string(), "' 2>&1");
        const int status = std::system(cmd.c_str());
        const int rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        sweep = str("sweep --grid all exit ", rc);
        if (rc != 0) o.fail(str("full sweep exit status ", rc, ", expected 0 (table in ", dir.string(), ")"));
    } else {
        o.fail(sweep);
    }
    o.summary = str("symbolic ", symbolic, "/", total, " pairs with k <= 12; numeric ", numeric, "/", checked,
                    " rkp-euler comparisons; ", sweep);
    return o;
}

// 7 -------------------------------------------------------------------------
Outcome structural_counts(const Shared& s) {
    Outcome o;
    int axis_ok = 0, axis_total = 0;
    for (const auto& d : s.dist) {
        ++axis_total;
        const auto tag = str(to_string(d.kind), " (", d.k, ",", d.l, ") mu = 0.25");
        if (!d.run) {
            o.fail(tag + ": " + d.error);
            continue;
        }
        const auto& r = *d.run;
        bool ok = true;
        if (r.axis.positive != 2 * d.k || r.axis.negative != 2 * d.l) {
            ok = false;
            o.fail(str(tag, ": axis crossings (", r.axis.positive, ", ", r.axis.negative, "), expected (", 2 * d.k, ", ",
                       2 * d.l, ")"));
        }
        if (r.cycles.positive != d.k || r.cycles.negative != d.l) {
            ok = false;
            o.fail(str(tag, ": cycles (", r.cycles.positive, ", ", r.cycles.negative, ")"));
        }
        if (ok) ++axis_ok;
    }
    int cyc_ok = 0, cyc_total = 0;
    auto check_cycles = [&](const std::vector<EulerResult>& rs) {
        for (const auto& r : rs) {
            if (!r.run) continue;
            ++cyc_total;
            const auto c = cycle_counts(r.run->orbit);
            if (c.positive == r.k && c.negative == r.l)
                ++cyc_ok;
            else
                o.fail(str("generic (", r.k, ",", r.l, ") mu = ", r.mu, ": cycles (", c.positive, ", ", c.negative, ")"));
        }
    };
    check_cycles(s.euler);
    check_cycles(s.euler_c2);
    check_cycles(s.partners);
    o.summary = str("axis and cycle counts on ", axis_ok, "/", axis_total, " distinguished orbits; cycle counts on ",
                    cyc_ok, "/", cyc_total, " generic orbits");
    return o;
}

// 8 -------------------------------------------------------------------------
Outcome properties(const Shared& s) {
    Outcome o;
    int odd = 0, reports = 0;
    auto prop = [&](const InvariantReport& r, const std::string& tag) {
        ++reports;
        if (r.w0 % 2 == 0) return;
        ++odd;
        if (r.j2 != r.j1.twice - 1) o.fail(str(tag, ": w0 = ", r.w0, " but J2 = ", r.j2, ", 2 J1 - 1 = ", r.j1.twice - 1));
    };
    double worst_drift = 0, worst_closure = 0;
    for (const auto& r : s.rkp) {
        if (!r.run) continue;
        const auto tag = str("RKP (", r.k, ",", r.l, ") e = ", r.e);
        prop(r.run->report, tag);
        worst_drift = std::max(worst_drift, r.run->drift);
        worst_closure = std::max(worst_closure, r.run->closure_error);
        if (r.run->drift >= 1e-8) o.fail(str(tag, ": drift ", r.run->drift));
        if (r.run->closure_error >= 1e-6) o.fail(str(tag, ": closure ", r.run->closure_error));
    }
    for (const auto* group : {&s.euler, &s.euler_c2, &s.partners})
        for (const auto& r : *group) {
            if (!r.run) continue;
            const auto tag = str("Euler (", r.k, ",", r.l, ") mu = ", r.mu);
            prop(r.run->report, tag);
            const double d = r.run->drift.max();
            worst_drift = std::max(worst_drift, d);
            worst_closure = std::max(worst_closure, r.run->orbit.closure_error);
            if (d >= 1e-8) o.fail(str(tag, ": drift ", d));
            if (r.run->orbit.closure_error >= 1e-6) o.fail(str(tag, ": closure ", r.run->orbit.closure_error));
        }

    // rotation, scaling and orientation, on e = 0.5 and mu = 0.25. Shifted
    // copies are run too but only reported: adding an offset rounds the
    // near-Earth passes, whose mirror branches can lie closer than one ulp
    // of the offset, and the gate then refuses the curve.
    int transformed = 0, shifted = 0, shifted_refused = 0;
    int stable = 0, stable_total = 0;
    std::vector<std::string> shift_notes;
    auto invariance = [&](const ClosedCurve& c, const InvariantReport& base, const GenericityThresholds& thr,
                          const std::string& tag) {
        struct T {
            const char* name;
            double scale, angle;
            bool shift;
        };
        const double D = c.diameter();
        for (const auto& t : {T{"rotate", 1.0, 2.1, false}, T{"scale", 37.5, 0.0, false},
                              T{"rotate and scale", 0.02, -0.9, false}, T{"translate", 1.0, 0.0, true},
                              T{"rotate, scale and translate", 0.02, -0.9, true}}) {
            const Vec2 shift = t.shift ? Vec2{0.375, -0.25} * (t.scale * D) : Vec2{0, 0};
            t.shift ? ++shifted : ++transformed;
            try {
                const auto r = compute_invariants(c.transformed(t.scale, t.angle, shift), shift, thr);
                if (!r.same_invariants(base)) o.fail(str(tag, ": ", t.name, " changes the report"));
            } catch (const Error& e) {
                if (t.shift) {
                    ++shifted_refused;
                    shift_notes.push_back(str("informational, ", tag, ": ", t.name, " refused: ", e.what()));
                } else {
                    o.fail(str(tag, ": ", t.name, ": ", e.what()));
                }
            }
        }
        ++transformed;
        InvariantReport rev;
        try {
            rev = compute_invariants(c.reversed(), {0, 0}, thr);
        } catch (const Error& e) {
            o.fail(str(tag, ": reversed: ", e.what()));
            return;
        }
        if (rev.turning_number != -base.turning_number || rev.w0 != -base.w0 || rev.jplus != base.jplus ||
            rev.j1 != base.j1 || rev.j2 != base.j2 || rev.n_double_points != base.n_double_points)
            o.fail(tag + ": reversal changes more than the signs of the turning and winding numbers");
    };
    for (const auto& r : s.rkp) {
        if (!r.run || r.e != 0.5) continue;
        const auto tag = str("RKP (", r.k, ",", r.l, ")");
        invariance(r.run->curve, r.run->report, kRkpThresholds, tag);
        ++stable_total;
        RkpTorusParams p = r.run->params;
        try {
            const auto twice = compute_invariants(rkp_orbit(p, 2 * r.run->samples), {0, 0}, kRkpThresholds);
            if (twice.same_invariants(r.run->report))
                ++stable;
            else
                o.fail(tag + ": report changes at twice the resolution");
        } catch (const Error& e) {
            o.fail(tag + ": at twice the resolution: " + e.what());
        }
    }
    for (const auto& r : s.euler) {
        if (!r.run || r.mu != 0.25) continue;
        const auto tag = str("Euler (", r.k, ",", r.l, ")");
        invariance(r.run->orbit.curve, r.run->report, kEulerThresholds, tag);
        ++stable_total;
        try {
            const auto orb = synthesize_orbit(r.run->params, 2 * r.run->samples);
            if (compute_invariants(orb.curve, {0, 0}, kEulerThresholds).same_invariants(r.run->report))
                ++stable;
            else
                o.fail(tag + ": report changes at twice the resolution");
        } catch (const Error& e) {
            o.fail(tag + ": at twice the resolution: " + e.what());
        }
    }
    for (const auto& n : shift_notes) o.note(n);
    o.summary = str("J2 = 2 J1 - 1 on ", odd, " odd-w0 reports of ", reports, "; ", transformed,
                    " rotated, scaled or reversed reports unchanged; shifted copies ", shifted - shifted_refused, "/",
                    shifted, " unchanged, ", shifted_refused, " refused; stable at 2S on ", stable, "/", stable_total, "; worst drift ", worst_drift,
                    ", worst closure ", worst_closure);
    return o;
}

// 9 -------------------------------------------------------------------------
Outcome oracles() {
    Outcome o;
    int same = 0;
    const auto corpus = fixture::corpus();
    for (const auto& [name, curve] : corpus) {
        CrossingOptions lax;
        lax.strict = false;
        const auto fast = find_crossings(curve, lax);
        const auto slow = oracle::all_pairs_crossings(curve);
        std::set<std::pair<std::size_t, std::size_t>> a, b;
        for (const auto& c : fast) a.insert({c.seg_a, c.seg_b});
        for (const auto& h : slow) b.insert({h.a, h.b});
        if (a == b && fast.size() == slow.size())
            ++same;
        else
            o.fail(str(name, ": detector ", fast.size(), " crossings, all-pairs ", slow.size()));
    }
    int periods = 0, tori = 0;
    double worst = 0;
    for (double mu : kMu)
        for (const auto& [k, l] : coprime_pairs(9)) {
            ++tori;
            const auto t = make_torus(mu, k, l);
            const auto off = torus_offsets(t.euler);
            const auto P = separated_periods(mu, off);
            const auto Q = oracle::integrate_periods(mu, off.dc, off.dg);
            const double rel = std::max(std::abs(P.T_lambda - Q.T_lambda) / Q.T_lambda, std::abs(P.T_nu - Q.T_nu) / Q.T_nu);
            worst = std::max(worst, rel);
            if (rel < 1e-8)
                ++periods;
            else
                o.fail(str("(", k, ",", l, ") mu = ", mu, ": periods differ by ", rel, " relative"));
        }
    o.summary = str("crossing sets identical on ", same, "/", corpus.size(), " corpus curves; periods within 1e-8 on ",
                    periods, "/", tori, " tori (worst ", worst, ")");
    return o;
}

std::set<int> parse_list(const std::string& s) {
    std::set<int> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.insert(std::stoi(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance run"};
    std::string expect_red, cli, only;
    app.add_option("--expect-red", expect_red, "comma-separated criteria expected to fail");
    app.add_option("--cli", cli, "path of the torusinv binary, for the full sweep");
    app.add_option("--only", only, "comma-separated criteria to run (default all)");
    CLI11_PARSE(app, argc, argv);
    const auto expected = parse_list(expect_red);
    auto wanted = parse_list(only);
    if (wanted.empty()) wanted = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    auto want = [&](std::initializer_list<int> cs) {
        for (int c : cs)
            if (wanted.count(c)) return true;
        return false;
    };

    const auto t0 = std::chrono::steady_clock::now();
    Shared s;
    if (want({2, 6, 8}))
        for (const auto& [k, l] : coprime_pairs(9))
            for (double e : kEcc) s.rkp.push_back(rkp_case(k, l, e));
    if (want({3, 5, 6, 7, 8})) {
        for (double mu : kMu)
            for (const auto& [k, l] : coprime_pairs(9)) s.euler.push_back(euler_case(k, l, mu));
    }
    if (want({3, 7, 8}))
        for (const auto& [k, l] : coprime_pairs(9)) {
            const auto ec = default_energy(0.25, k, l);
            s.euler_c2.push_back(euler_case(k, l, 0.25, ec.c_lo + 0.8 * (ec.c_hi - ec.c_lo)));
        }
    if (want({6, 7, 8}))
        for (const auto& [k, l] : coprime_pairs(9)) {
            const auto [ek, el] = matched_pair(k, l);
            if (ek > 9) s.partners.push_back(euler_case(ek, el, 0.25));
        }
    if (want({4, 5, 7}))
        for (const auto& [k, l] : coprime_pairs(9))
            for (auto kind : {OrbitKind::BrakeBrake, OrbitKind::BrakeCollision, OrbitKind::CollisionCollision}) {
                try {
                    require_kind_available(k, l, kind);
                } catch (const Error&) {
                    continue;
                }
                DistResult d{k, l, kind, std::nullopt, {}};
                try {
                    d.run = run_euler_distinguished(0.25, k, l, std::nullopt, kind);
                } catch (const Error& e) {
                    d.error = code_str(e.code()) + ": " + e.what();
                }
                s.dist.push_back(std::move(d));
            }
    std::printf("orbits computed in %.0f s\n", seconds_since(t0));

    const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
        {1, [] { return standard_curves(); }},
        {2, [&] { return rkp_grid(s); }},
        {3, [&] { return euler_grid(s); }},
        {4, [&] { return quadruple_counts(s); }},
        {5, [&] { return distinguished_formulas(s); }},
        {6, [&] { return agreement(s, cli); }},
        {7, [&] { return structural_counts(s); }},
        {8, [&] { return properties(s); }},
        {9, [] { return oracles(); }},
    };
    std::set<int> failed;
    for (const auto& [n, run] : criteria) {
        if (!wanted.count(n)) continue;
        const auto t = std::chrono::steady_clock::now();
        const auto out = run();
        if (!out.pass) failed.insert(n);
        std::printf("criterion %d: %s  %s  [%.1f s]\n", n, out.pass ? "PASS" : "FAIL", out.summary.c_str(), seconds_since(t));
        for (const auto& note : out.notes) std::printf("    %s\n", note.c_str());
        std::fflush(stdout);
    }

    std::set<int> expected_here;
    for (int n : expected)
        if (wanted.count(n)) expected_here.insert(n);
    auto list = [](const std::set<int>& xs) {
        std::string r;
        for (int x : xs) r += (r.empty() ? "" : ",") + std::to_string(x);
        return r.empty() ? std::string("none") : r;
    };
    std::printf("failing: %s; expected to fail: %s; total %.0f s\n", list(failed).c_str(), list(expected_here).c_str(),
                seconds_since(t0));
    if (failed != expected_here) {
        std::printf("the failing set differs from the expected one\n");
        return 1;
    }
    return 0;
}
