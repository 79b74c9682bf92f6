#pragma once

#include "dioph/exactcore.hpp"

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace dioph {

struct CFExpansion {
    CertifiedReal alpha;
    Int a0;
    std::vector<Int> partials;                    // a_1, a_2, ...
    std::vector<std::pair<Int, Int>> convergents;  // (p_nu, q_nu), nu = 0, 1, ...
    std::vector<CertifiedReal> remainders;         // |q_nu alpha - p_nu|
    bool terminated = false;                       // rational input ran out of terms

    std::size_t terms() const { return convergents.size(); }
};

constexpr std::size_t kFullExpansion = std::numeric_limits<std::size_t>::max();

// First n terms a_0, ..., a_{n-1}; kFullExpansion expands a rational completely.
CFExpansion cf_expand(const CertifiedReal& alpha, std::size_t n);
// Builds convergents and remainders for the value [a0; partials...].
CFExpansion cf_from_partials(const Int& a0, const std::vector<Int>& partials);

struct IdentityReport {
    bool pass = true;
    std::size_t first_violation = 0;  // index i of the offending a_i
    std::string detail;
};

// a_i = [q_i / q_{i-1}] and a_i = [xi_{i-2} / xi_{i-1}] wherever defined.
IdentityReport partial_quotient_identities(const CFExpansion& e);

struct Prop1Report {
    Rat sup_q_ratio;
    std::size_t sup_q_index = 0;  // nu with q_nu / q_{nu-1} maximal
    Interval inf_xi_ratio;
    Int sup_partial;
    bool invariants_hold = true;  // q_nu xi_{nu-1} <= 1, alternation, |alpha - p/q| < 1/(q q')
    std::string invariant_detail;
};

Prop1Report prop1_report(const CFExpansion& e);

}  // namespace dioph
