#include "torusinv/correspondence.hpp"

#include <sstream>

#include "torusinv/errors.hpp"
#include "torusinv/euler.hpp"

namespace torusinv {

std::string to_string(System s) { return s == System::RKP ? "rkp" : "euler"; }

TorusKnotType knot_type(System system, int k, int l) {
    require_resonance(k, l);
    const bool even = (k + l) % 2 == 0;
    if (system == System::Euler) return {k, l, !even};
    if (even) return {(k + l) / 2, (k - l) / 2, true};
    return {k + l, k - l, false};
}

std::pair<int, int> matched_pair(int k, int l) {
    const auto t = knot_type(System::RKP, k, l);
    return {t.p, t.q};
}

namespace {

void compare(std::vector<AgreementDiff>& diffs, const std::string& field, const InvariantPair& want,
             const InvariantPair& got) {
    if (want.j1 != got.j1) diffs.push_back({field + ".j1", to_string(want.j1), to_string(got.j1)});
    if (want.j2 != got.j2) diffs.push_back({field + ".j2", std::to_string(want.j2), std::to_string(got.j2)});
}

}  // namespace

AgreementReport verify_agreement(int k, int l, const InvariantReport* rkp, const InvariantReport* euler) {
    AgreementReport r;
    r.k = k;
    r.l = l;
    r.euler_pair = matched_pair(k, l);
    r.rkp_formula = rkp_invariants_formula(k, l);
    r.euler_formula = euler_invariants_formula(r.euler_pair.first, r.euler_pair.second);
    compare(r.diffs, "formula", r.rkp_formula, r.euler_formula);
    r.symbolic = r.diffs.empty();
    if (rkp || euler) {
        r.numeric_checked = true;
        const std::size_t before = r.diffs.size();
        if (rkp) {
            r.rkp_geometric = InvariantPair{rkp->j1, rkp->j2};
            compare(r.diffs, "rkp_geometric", r.rkp_formula, *r.rkp_geometric);
        }
        if (euler) {
            r.euler_geometric = InvariantPair{euler->j1, euler->j2};
            compare(r.diffs, "euler_geometric", r.euler_formula, *r.euler_geometric);
        }
        if (rkp && euler) compare(r.diffs, "rkp_vs_euler", *r.rkp_geometric, *r.euler_geometric);
        r.numeric = r.diffs.size() == before;
    }
    return r;
}

AgreementReport require_agreement(int k, int l, const InvariantReport* rkp, const InvariantReport* euler) {
    auto r = verify_agreement(k, l, rkp, euler);
    if (!r.agree()) {
        std::ostringstream msg;
        msg << "invariants disagree for (" << k << "," << l << "):";
        for (const auto& d : r.diffs) msg << " " << d.field << " expected " << d.expected << " got " << d.actual << ";";
        throw Error(ErrorCode::Disagreement, msg.str());
    }
    return r;
}

}  // namespace torusinv
