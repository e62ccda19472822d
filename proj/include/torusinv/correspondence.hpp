#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torusinv/invariants.hpp"
#include "torusinv/kepler.hpp"

namespace torusinv {

enum class System { RKP, Euler };
std::string to_string(System s);

struct TorusKnotType {
    int p = 0;
    int q = 0;
    bool contractible = false;  // of the orbit downstairs in RP^3
    friend bool operator==(const TorusKnotType&, const TorusKnotType&) = default;
};

// RKP: ((k+l)/2, (k-l)/2) when k+l is even, else (k+l, k-l); contractible iff k+l even.
// Euler: (k, l); contractible iff k+l odd.
TorusKnotType knot_type(System system, int k, int l);

// Euler resonance whose orbits carry the same knot type as the RKP (k, l) family.
std::pair<int, int> matched_pair(int k, int l);

struct AgreementDiff {
    std::string field;
    std::string expected;
    std::string actual;
};

struct AgreementReport {
    int k = 0, l = 0;
    std::pair<int, int> euler_pair;
    InvariantPair rkp_formula;
    InvariantPair euler_formula;
    bool symbolic = false;
    bool numeric_checked = false;
    bool numeric = false;
    std::optional<InvariantPair> rkp_geometric;
    std::optional<InvariantPair> euler_geometric;
    std::vector<AgreementDiff> diffs;
    bool agree() const { return symbolic && (!numeric_checked || numeric); }
};

// Never throws on disagreement; the diff lists every mismatch.
AgreementReport verify_agreement(int k, int l, const InvariantReport* rkp = nullptr,
                                 const InvariantReport* euler = nullptr);

// As verify_agreement, throwing Disagreement with the diff.
AgreementReport require_agreement(int k, int l, const InvariantReport* rkp = nullptr,
                                  const InvariantReport* euler = nullptr);

}  // namespace torusinv
