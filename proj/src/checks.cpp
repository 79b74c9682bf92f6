#include "dioph/checks.hpp"

namespace dioph {

void CheckReport::le(std::size_t idx, const CertifiedReal& lhs, const CertifiedReal& rhs, bool strict) {
    ++checked;
    bool ok = strict ? certified_lt(lhs, rhs, name + " at index " + std::to_string(idx))
                     : certified_le(lhs, rhs, name + " at index " + std::to_string(idx));
    if (!ok) fail(idx, "inequality fails at index " + std::to_string(idx));
    if (!rhs.is_exact_zero()) {
        Interval r = lhs.enclose(96).abs() / rhs.enclose(96).abs();
        if (!has_ratio || r.hi > worst_ratio) worst_ratio = r.hi;
        has_ratio = true;
    }
}

void CheckReport::fail(std::size_t idx, const std::string& why) {
    if (pass) {
        first_violation = idx;
        detail = why;
    }
    pass = false;
    ++violations;
}

void CheckReport::merge(const CheckReport& o) {
    if (name.empty()) name = o.name;
    if (!o.pass) {
        if (pass) {
            first_violation = o.first_violation;
            detail = o.detail;
        }
        pass = false;
    }
    checked += o.checked;
    violations += o.violations;
    if (o.has_ratio && (!has_ratio || o.worst_ratio > worst_ratio)) worst_ratio = o.worst_ratio;
    has_ratio = has_ratio || o.has_ratio;
}

}  // namespace dioph
