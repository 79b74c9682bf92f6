#include "dioph/simul.hpp"

#include "fixed.hpp"

namespace dioph {

using detail::i128;

IntVec ApproxVector::vec() const {
    IntVec v{q};
    v.insert(v.end(), a.begin(), a.end());
    return v;
}

Int nearest_integer(const CertifiedReal& x, const std::string& what) {
    Interval e = x.enclose(128);
    Int n = round_nearest(e.mid());
    CertifiedReal half(Rat(1, 2));
    for (Int cand : {n, Int(n - 1), Int(n + 1)}) {
        CertifiedReal dist = (x - CertifiedReal(cand)).abs();
        Ordering o = compare_or_throw(dist, half, what);
        if (o == Ordering::Less) return cand;
        // At a half-integer either neighbour gives the same distance.
        if (o == Ordering::Equal) return cand;
    }
    throw Error(ErrorKind::UndecidablePrecision, what + ": nearest integer not found");
}

ApproxVector remainder_at(const TargetVector& alpha, const Int& q) {
    ApproxVector v;
    v.q = q;
    v.xi = CertifiedReal(0L);
    for (size_t j = 0; j < alpha.dim(); ++j) {
        CertifiedReal x = CertifiedReal(q) * alpha.alpha[j];
        Int a = nearest_integer(x, "q = " + q.get_str());
        v.a.push_back(a);
        CertifiedReal r = (x - CertifiedReal(a)).abs();
        v.xi = j == 0 ? r : cmax(v.xi, r);
    }
    return v;
}

SimulSequence enumerate_best_simul(const TargetVector& alpha, std::uint64_t q_max, const SimulOptions& opt) {
    if (q_max < 1) throw Error(ErrorKind::DomainError, "q_max must be at least 1");
    if (q_max > (1ull << 28)) throw Error(ErrorKind::DomainError, "q_max exceeds the scan limit 2^28");
    const detail::FixedTarget f = detail::make_fixed(alpha);
    const size_t d = f.d;
    SimulSequence out;
    i128 rec_lo = 0, rec_hi = 0;

    auto set_record = [&](ApproxVector v, bool have_fixed, i128 lo, i128 hi) {
        if (have_fixed) {
            rec_lo = lo;
            rec_hi = hi;
        } else {
            detail::fixed_enclosure(v.xi, rec_lo, rec_hi);
        }
        out.push_back(std::move(v));
    };

    for (std::uint64_t q = 1; q <= q_max; ++q) {
        const i128 qq = static_cast<i128>(q);
        i128 xl = 0, xh = 0;
        bool ambiguous = false;
        for (size_t j = 0; j < d; ++j) {
            i128 n, dl, dh;
            if (!detail::nearest(qq * f.lo[j], qq * f.hi[j], n, dl, dh)) {
                ambiguous = true;
                break;
            }
            if (dl > xl) xl = dl;
            if (dh > xh) xh = dh;
        }
        if (out.empty()) {
            set_record(remainder_at(alpha, Int(static_cast<unsigned long>(q))), !ambiguous, xl, xh);
            continue;
        }
        if (!ambiguous && xh < rec_lo) {
            set_record(remainder_at(alpha, Int(static_cast<unsigned long>(q))), true, xl, xh);
            continue;
        }
        if (!ambiguous && xl > rec_hi) continue;
        ApproxVector cand = remainder_at(alpha, Int(static_cast<unsigned long>(q)));
        const ApproxVector& rec = out.back();
        Ordering o = certified_compare(cand.xi, rec.xi, Rat(1, Int(1) << precision_bits()));
        if (o == Ordering::Less) {
            set_record(std::move(cand), !ambiguous, xl, xh);
        } else if (o == Ordering::Equal) {
            if (!opt.allow_ties)
                throw Error(ErrorKind::TieDetected,
                            "q = " + std::to_string(q) + " and q = " + rec.q.get_str() + " have equal remainders");
        } else if (o == Ordering::TieUndecided) {
            throw Error(ErrorKind::UndecidablePrecision,
                        "cannot order remainders of q = " + std::to_string(q) + " and q = " + rec.q.get_str());
        }
    }
    return out;
}

CheckReport check_minkowski_simul(const SimulSequence& seq, std::size_t d) {
    CheckReport r;
    r.name = "bo";
    for (size_t nu = 0; nu + 1 < seq.size(); ++nu)
        r.le(nu, seq[nu].xi.pow(static_cast<unsigned>(d)) * CertifiedReal(seq[nu + 1].q), CertifiedReal(1L));
    return r;
}

Interval k_constant_sq(const TargetVector& alpha) {
    Interval s = norm_sq_with_one(alpha).enclose(128);
    Rat four_d(4 * static_cast<long>(alpha.dim()));
    return Interval::point(1) / (Interval::point(four_d) * s);
}

VolumeBoundsReport check_two_dim_volume_bounds(const SimulSequence& seq, const TargetVector& alpha) {
    VolumeBoundsReport r;
    r.upper.name = "two_dim_volume_upper";
    r.lower.name = "two_dim_volume_lower";
    r.dee.name = "q_growth_from_volume";
    const size_t d = alpha.dim();
    const CertifiedReal four_d_s = CertifiedReal(Int(4 * static_cast<long>(d))) * norm_sq_with_one(alpha);
    if (d < 2) r.dee.skipped = true;
    for (size_t nu = 0; nu + 1 < seq.size(); ++nu) {
        Int delta_sq = completed_volume_sq({seq[nu].vec(), seq[nu + 1].vec()});
        r.delta2_sq.push_back(delta_sq);
        CertifiedReal xq = seq[nu].xi * CertifiedReal(seq[nu + 1].q);
        CertifiedReal xq2 = xq * xq;
        r.upper.le(nu, xq2, CertifiedReal(delta_sq));
        r.lower.le(nu, CertifiedReal(delta_sq), four_d_s * xq2);
        if (d >= 2) {
            Int lhs;
            mpz_pow_ui(lhs.get_mpz_t(), delta_sq.get_mpz_t(), d);
            Int qpow;
            mpz_pow_ui(qpow.get_mpz_t(), seq[nu + 1].q.get_mpz_t(), 2 * (d - 1));
            r.dee.le(nu, CertifiedReal(lhs), four_d_s.pow(static_cast<unsigned>(d)) * CertifiedReal(qpow));
        }
    }
    return r;
}

IndependenceChain build_independence_chain(const SimulSequence& seq, std::size_t start) {
    if (seq.empty()) throw Error(ErrorKind::NotSpanning, "empty sequence");
    const size_t dim = seq[0].a.size() + 1;
    if (start + 1 >= seq.size()) throw Error(ErrorKind::NotSpanning, "no successor for the starting vector");
    IndependenceChain c;
    std::vector<IntVec> rows{seq[start].vec()};
    c.indices.push_back(start);
    size_t next = start + 1;
    while (rows.size() < dim) {
        size_t mu = next;
        while (mu < seq.size()) {
            std::vector<IntVec> trial = rows;
            trial.push_back(seq[mu].vec());
            if (rank(trial) == trial.size()) break;
            ++mu;
        }
        if (mu == seq.size())
            throw Error(ErrorKind::NotSpanning,
                        "best approximations from index " + std::to_string(start) + " span only dimension " +
                            std::to_string(rows.size()));
        rows.push_back(seq[mu].vec());
        c.indices.push_back(mu);
        next = mu + 1;
    }
    for (size_t j = 1; j <= dim; ++j) {
        std::vector<IntVec> sub(rows.begin(), rows.begin() + static_cast<long>(j));
        c.subspaces.push_back(sub);
        c.volumes_sq.push_back(completed_volume_sq(sub));
    }
    return c;
}

CheckReport check_lemma1(const IndependenceChain& chain, const SimulSequence& seq) {
    CheckReport r;
    r.name = "lemma1";
    const size_t d = chain.indices.size() - 1;
    const CertifiedReal four_d(Int(4 * static_cast<long>(d)));
    for (size_t j = 1; j < chain.indices.size(); ++j) {
        size_t idx = chain.indices[j];
        const ApproxVector& prev = seq[idx - 1];
        CertifiedReal lhs = CertifiedReal(chain.volumes_sq[j] * prev.q * prev.q);
        CertifiedReal rhs = four_d * CertifiedReal(seq[idx].q * seq[idx].q) * prev.xi * prev.xi * CertifiedReal(chain.volumes_sq[j - 1]);
        r.le(j, lhs, rhs);
    }
    return r;
}

Margin badness_margin(const SimulSequence& seq, std::size_t d, const Int& q_min) {
    Margin m;
    bool have = false;
    CertifiedReal best;
    for (size_t nu = 0; nu < seq.size(); ++nu) {
        if (seq[nu].q < q_min) continue;
        CertifiedReal v = CertifiedReal(seq[nu].q) * seq[nu].xi.pow(static_cast<unsigned>(d));
        if (!have || compare_or_throw(v, best, "badness margin") == Ordering::Less) {
            best = v;
            m.index = nu;
            have = true;
        }
    }
    if (!have) throw Error(ErrorKind::DomainError, "no records at or above q_min");
    m.value = best.enclose(128);
    return m;
}

Rat sup_q_ratio(const SimulSequence& seq) {
    Rat best = 0;
    for (size_t nu = 0; nu + 1 < seq.size(); ++nu) {
        Rat r(seq[nu + 1].q, seq[nu].q);
        r.canonicalize();
        if (r > best) best = r;
    }
    return best;
}

Interval inf_xi_ratio(const SimulSequence& seq) {
    Interval best;
    bool have = false;
    for (size_t nu = 0; nu + 1 < seq.size(); ++nu) {
        if (seq[nu].xi.is_exact_zero()) continue;
        Interval r = seq[nu + 1].xi.enclose(128) / seq[nu].xi.enclose(128);
        best = have ? imin(best, r) : r;
        have = true;
    }
    if (!have) return Interval::point(0);
    return best;
}

CheckReport check_growth_to_margin(const SimulSequence& seq, const TargetVector& alpha) {
    CheckReport r;
    r.name = "growth_to_margin";
    const size_t d = alpha.dim();
    Rat M = sup_q_ratio(seq);
    Rat m2d = 1;
    for (size_t i = 0; i < 2 * d; ++i) m2d *= M;
    Int four_d_pow;
    mpz_ui_pow_ui(four_d_pow.get_mpz_t(), 4 * d, d);
    CertifiedReal factor = CertifiedReal(Rat(four_d_pow) * m2d) * norm_sq_with_one(alpha);
    for (size_t s = 0; s + 1 < seq.size(); ++s) {
        try {
            build_independence_chain(seq, s);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::NotSpanning) break;
            throw;
        }
        CertifiedReal margin = CertifiedReal(seq[s].q) * seq[s].xi.pow(static_cast<unsigned>(d));
        r.le(s, CertifiedReal(1L), margin * margin * factor);
    }
    return r;
}

}  // namespace dioph
