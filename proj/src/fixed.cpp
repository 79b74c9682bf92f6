#include "fixed.hpp"

namespace dioph::detail {

namespace {

i128 from_int(const Int& v) {
    if (mpz_sizeinbase(v.get_mpz_t(), 2) > 120) throw Error(ErrorKind::DomainError, "fixed-point overflow");
    Int a = abs(v);
    i128 r = 0;
    Int hi = a >> 64;
    Int lo = a - (hi << 64);
    r = (static_cast<i128>(mpz_get_ui(hi.get_mpz_t())) << 64) | static_cast<i128>(mpz_get_ui(lo.get_mpz_t()));
    return v < 0 ? -r : r;
}

}  // namespace

Int to_int(i128 v) {
    bool neg = v < 0;
    unsigned __int128 a = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    Int hi(static_cast<unsigned long>(a >> 64));
    Int lo(static_cast<unsigned long>(a & ~static_cast<unsigned long>(0)));
    Int r = (hi << 64) + lo;
    return neg ? Int(-r) : r;
}

void fixed_enclosure(const CertifiedReal& x, i128& lo, i128& hi) {
    Interval e = x.enclose(kFracBits + 8);
    Rat unit(Int(1) << kFracBits);
    lo = from_int(floor_rat(e.lo * unit));
    hi = from_int(ceil_rat(e.hi * unit));
}

FixedTarget make_fixed(const TargetVector& t) {
    FixedTarget f;
    f.d = t.dim();
    Int unit = Int(1) << kFracBits;
    for (const auto& a : t.alpha) {
        Interval e = a.enclose(kFracBits + 16);
        Int ip = floor_rat(e.lo);
        Rat lo = (e.lo - Rat(ip)) * Rat(unit);
        Rat hi = (e.hi - Rat(ip)) * Rat(unit);
        Int l = floor_rat(lo), h = ceil_rat(hi);
        if (mpz_sizeinbase(h.get_mpz_t(), 2) > kFracBits + 4)
            throw Error(ErrorKind::UndecidablePrecision, "target enclosure too wide for the scan: " + a.describe());
        f.ipart.push_back(ip);
        f.lo.push_back(from_int(l));
        f.hi.push_back(from_int(h));
    }
    return f;
}

}  // namespace dioph::detail
