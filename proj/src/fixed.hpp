#pragma once

#include "dioph/target.hpp"

#include <cstdint>
#include <vector>

namespace dioph::detail {

using i128 = __int128;

// Fractional parts of the target as integer intervals in units of 2^-kFracBits.
constexpr int kFracBits = 96;

struct FixedTarget {
    std::size_t d = 0;
    std::vector<Int> ipart;
    std::vector<i128> lo, hi;
};

FixedTarget make_fixed(const TargetVector& t);

// Nearest integer to x in [xl, xh] (fixed units) and the distance enclosure.
// Returns false when the interval straddles a half-integer.
inline bool nearest(i128 xl, i128 xh, i128& n, i128& dl, i128& dh) {
    const i128 half = static_cast<i128>(1) << (kFracBits - 1);
    i128 nl = (xl + half) >> kFracBits;
    i128 nh = (xh + half) >> kFracBits;
    if (nl != nh) return false;
    n = nl;
    i128 base = n << kFracBits;
    i128 a = xl - base, b = xh - base;
    if (a >= 0) {
        dl = a;
        dh = b;
    } else if (b <= 0) {
        dl = -b;
        dh = -a;
    } else {
        dl = 0;
        dh = -a > b ? -a : b;
    }
    return true;
}

Int to_int(i128 v);

// Outward-rounded enclosure of a nonnegative value below 2^30 in fixed units.
void fixed_enclosure(const CertifiedReal& x, i128& lo, i128& hi);

}  // namespace dioph::detail
