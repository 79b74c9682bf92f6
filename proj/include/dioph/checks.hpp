#pragma once

#include "dioph/exactcore.hpp"

#include <string>

namespace dioph {

// Outcome of a family of inequalities lhs <= rhs evaluated over a range of indices.
// ratio is lhs/rhs (upper enclosure); values <= 1 mean the inequality holds.
struct CheckReport {
    std::string name;
    bool pass = true;
    bool skipped = false;
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::size_t first_violation = 0;
    std::string detail;
    bool has_ratio = false;
    Rat worst_ratio;

    // Records lhs <= rhs (or lhs < rhs when strict) at index idx.
    void le(std::size_t idx, const CertifiedReal& lhs, const CertifiedReal& rhs, bool strict = false);
    void fail(std::size_t idx, const std::string& why);
    void merge(const CheckReport& other);
};

}  // namespace dioph
