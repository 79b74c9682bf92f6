#include "dioph/cf1d.hpp"

namespace dioph {

namespace {

std::vector<Int> rational_cf(Rat x, std::size_t limit) {
    std::vector<Int> out;
    while (out.size() < limit) {
        Int a = floor_rat(x);
        out.push_back(a);
        Rat f = x - Rat(a);
        if (f == 0) break;
        x = 1 / f;
    }
    return out;
}

void fill_convergents(CFExpansion& e, const std::vector<Int>& terms) {
    e.a0 = terms.front();
    e.partials.assign(terms.begin() + 1, terms.end());
    Int pm = 1, qm = 0, p = terms[0], q = 1;
    e.convergents.push_back({p, q});
    for (size_t i = 1; i < terms.size(); ++i) {
        Int np = terms[i] * p + pm, nq = terms[i] * q + qm;
        pm = p;
        qm = q;
        p = np;
        q = nq;
        e.convergents.push_back({p, q});
    }
    for (const auto& [pp, qq] : e.convergents) e.remainders.push_back((CertifiedReal(qq) * e.alpha - CertifiedReal(pp)).abs());
}

}  // namespace

CFExpansion cf_expand(const CertifiedReal& alpha, std::size_t n) {
    if (n == 0) throw Error(ErrorKind::DomainError, "expansion length must be positive");
    CFExpansion e;
    e.alpha = alpha;
    if (auto r = alpha.as_rational()) {
        std::vector<Int> t = rational_cf(*r, n);
        e.terminated = n == kFullExpansion || rational_cf(*r, n + 1).size() == t.size();
        fill_convergents(e, t);
        return e;
    }
    if (n == kFullExpansion) throw Error(ErrorKind::DomainError, "full expansion requested for an irrational value");
    unsigned bits = 64 + static_cast<unsigned>(2 * n);
    while (true) {
        Interval iv = alpha.enclose(bits);
        std::vector<Int> a = rational_cf(iv.lo, n + 2), b = rational_cf(iv.hi, n + 2);
        size_t common = 0;
        while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
        if (common >= n + 1) {
            a.resize(n);
            fill_convergents(e, a);
            return e;
        }
        if (!alpha.is_exact() || bits >= precision_bits())
            throw Error(ErrorKind::UndecidablePrecision,
                        "only " + std::to_string(common ? common - 1 : 0) + " partial quotients are decidable");
        bits *= 2;
    }
}

CFExpansion cf_from_partials(const Int& a0, const std::vector<Int>& partials) {
    std::vector<Int> t{a0};
    t.insert(t.end(), partials.begin(), partials.end());
    Rat v = Rat(t.back());
    for (size_t i = t.size() - 1; i-- > 0;) v = Rat(t[i]) + 1 / v;
    CFExpansion e;
    e.alpha = CertifiedReal(v);
    e.terminated = true;
    fill_convergents(e, t);
    return e;
}

IdentityReport partial_quotient_identities(const CFExpansion& e) {
    IdentityReport rep;
    auto fail = [&](size_t i, const std::string& why) {
        if (rep.pass) {
            rep.pass = false;
            rep.first_violation = i;
            rep.detail = why;
        }
    };
    const auto& cv = e.convergents;
    for (size_t i = 1; i < cv.size() && rep.pass; ++i) {
        const Int& ai = e.partials[i - 1];
        Int q_prev2 = i >= 2 ? cv[i - 2].second : Int(0);
        const Int& q_prev = cv[i - 1].second;
        if (q_prev2 < q_prev) {
            Int f = cv[i].second / q_prev;
            if (f != ai) fail(i, "a_" + std::to_string(i) + " = " + ai.get_str() + " but [q_i/q_{i-1}] = " + f.get_str());
        }
        CertifiedReal xi_prev2 = i >= 2 ? e.remainders[i - 2] : CertifiedReal(1L);
        const CertifiedReal& xi_prev = e.remainders[i - 1];
        if (xi_prev.is_exact_zero()) continue;
        std::string tag = "xi ratio at a_" + std::to_string(i);
        bool lower = certified_le(CertifiedReal(ai) * xi_prev, xi_prev2, tag);
        bool upper = certified_lt(xi_prev2, CertifiedReal(ai + 1) * xi_prev, tag);
        if (!lower || !upper) fail(i, "a_" + std::to_string(i) + " = " + ai.get_str() + " disagrees with [xi_{i-2}/xi_{i-1}]");
    }
    return rep;
}

Prop1Report prop1_report(const CFExpansion& e) {
    if (e.terms() < 2) throw Error(ErrorKind::DomainError, "prop1 report needs at least two terms");
    Prop1Report r;
    const auto& cv = e.convergents;
    r.sup_q_ratio = 0;
    for (size_t nu = 1; nu < cv.size(); ++nu) {
        Rat ratio(cv[nu].second, cv[nu - 1].second);
        ratio.canonicalize();
        if (ratio > r.sup_q_ratio) {
            r.sup_q_ratio = ratio;
            r.sup_q_index = nu;
        }
    }
    r.sup_partial = 0;
    for (const auto& a : e.partials)
        if (a > r.sup_partial) r.sup_partial = a;

    const unsigned bits = 160;
    bool have = false;
    for (size_t nu = 0; nu + 1 < e.remainders.size(); ++nu) {
        if (e.remainders[nu + 1].is_exact_zero() || e.remainders[nu].is_exact_zero()) continue;
        Interval ratio = e.remainders[nu + 1].enclose(bits) / e.remainders[nu].enclose(bits);
        r.inf_xi_ratio = have ? imin(r.inf_xi_ratio, ratio) : ratio;
        have = true;
    }
    if (!have) r.inf_xi_ratio = Interval::point(0);

    auto violate = [&](const std::string& s) {
        if (r.invariants_hold) r.invariant_detail = s;
        r.invariants_hold = false;
    };
    for (size_t nu = 0; nu < cv.size(); ++nu) {
        CertifiedReal xi_prev = nu == 0 ? CertifiedReal(1L) : e.remainders[nu - 1];
        if (!certified_le(CertifiedReal(cv[nu].second) * xi_prev, CertifiedReal(1L), "q xi bound"))
            violate("q_nu xi_{nu-1} > 1 at nu = " + std::to_string(nu));
        if (nu + 1 < cv.size()) {
            CertifiedReal diff = e.alpha - CertifiedReal(frac(cv[nu].first, cv[nu].second));
            int s = diff.sign_or_throw("convergent side");
            int expect = nu % 2 == 0 ? 1 : -1;
            if (s != 0 && s != expect) violate("convergent " + std::to_string(nu) + " on the wrong side");
            Rat bound(1, cv[nu].second * cv[nu + 1].second);
            bound.canonicalize();
            bool last = e.terminated && nu + 2 == cv.size();
            bool ok = last ? certified_le(diff.abs(), CertifiedReal(bound), "convergent distance")
                           : certified_lt(diff.abs(), CertifiedReal(bound), "convergent distance");
            if (!ok)
                violate("|alpha - p/q| >= 1/(q q') at nu = " + std::to_string(nu));
        }
    }
    return r;
}

}  // namespace dioph
