#pragma once

#include "dioph/exactcore.hpp"

#include <string>
#include <vector>

namespace dioph {

struct TargetVector {
    std::vector<CertifiedReal> alpha;
    std::vector<std::string> source;

    std::size_t dim() const { return alpha.size(); }
    bool exact() const;
};

// Parses one component: "rat:<num>/<den>", "surd:(<a>+<b>*sqrt(<D>))/<c>" or
// "dec:<digits>~<radius>", optionally followed by integer or rational offsets
// such as " - 1" or "+ 1/2".
CertifiedReal parse_component(const std::string& text);
// Comma-separated components.
TargetVector parse_target(const std::string& text);

TargetVector make_target(std::vector<CertifiedReal> alpha);

// Sum of squares 1 + alpha_1^2 + ... + alpha_d^2 as a certified real.
CertifiedReal norm_sq_with_one(const TargetVector& t);

}  // namespace dioph
