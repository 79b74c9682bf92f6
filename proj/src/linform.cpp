#include "dioph/linform.hpp"

#include "fixed.hpp"

#include <exception>
#include <thread>

namespace dioph {

using detail::i128;

namespace {

LinFormVector exact_record(const TargetVector& alpha, const std::vector<long>& mbar) {
    LinFormVector v;
    CertifiedReal s(0L);
    Int M = 0;
    v.m.push_back(0);
    for (size_t j = 0; j < mbar.size(); ++j) {
        v.m.push_back(Int(mbar[j]));
        if (mbar[j] != 0) s = s + CertifiedReal(Int(mbar[j])) * alpha.alpha[j];
        Int a = std::abs(mbar[j]);
        if (a > M) M = a;
    }
    Int n = nearest_integer(s, "linear form at " + vec_string(v.m));
    v.m[0] = -n;
    v.M = M;
    v.value = s - CertifiedReal(n);
    v.L = v.value.abs();
    return v;
}

struct Candidate {
    std::vector<long> mbar;
    i128 lo = 0, hi = 0;
    std::optional<LinFormVector> exact;
};

// Orders two candidates, resolving overlapping fixed enclosures exactly.
Ordering compare_candidates(const TargetVector& alpha, Candidate& a, Candidate& b) {
    if (a.hi < b.lo) return Ordering::Less;
    if (a.lo > b.hi) return Ordering::Greater;
    if (!a.exact) a.exact = exact_record(alpha, a.mbar);
    if (!b.exact) b.exact = exact_record(alpha, b.mbar);
    Ordering o = certified_compare(a.exact->L, b.exact->L, Rat(1, Int(1) << precision_bits()));
    if (o == Ordering::TieUndecided)
        throw Error(ErrorKind::UndecidablePrecision,
                    "cannot order linear form values at " + vec_string(a.exact->m) + " and " + vec_string(b.exact->m));
    return o;
}

void set_fixed_from_exact(Candidate& c) { detail::fixed_enclosure(c.exact->L, c.lo, c.hi); }

Candidate shell_best(const TargetVector& alpha, const detail::FixedTarget& f, long M, bool allow_ties) {
    const size_t d = f.d;
    Candidate best;
    bool have = false;
    std::vector<long> m(d), lo(d), hi(d);
    for (size_t k = 0; k < d; ++k) {
        for (size_t i = 0; i < d; ++i) {
            if (i < k) lo[i] = -(M - 1), hi[i] = M - 1;
            else lo[i] = -M, hi[i] = M;
        }
        m = lo;
        auto advance = [&]() {
            for (size_t i = d; i-- > 0;) {
                if (i == k) {
                    if (m[i] == -M) {
                        m[i] = M;
                        return true;
                    }
                    m[i] = -M;
                    continue;
                }
                if (m[i] < hi[i]) {
                    ++m[i];
                    return true;
                }
                m[i] = lo[i];
            }
            return false;
        };
        do {
            long first = 0;
            for (long x : m)
                if (x != 0) {
                    first = x;
                    break;
                }
            if (first <= 0) continue;
            i128 xl = 0, xh = 0;
            for (size_t j = 0; j < d; ++j) {
                i128 mj = m[j];
                if (mj >= 0) xl += mj * f.lo[j], xh += mj * f.hi[j];
                else xl += mj * f.hi[j], xh += mj * f.lo[j];
            }
            i128 n, dl, dh;
            Candidate c;
            c.mbar = m;
            if (detail::nearest(xl, xh, n, dl, dh)) {
                c.lo = dl;
                c.hi = dh;
            } else {
                c.exact = exact_record(alpha, m);
                set_fixed_from_exact(c);
            }
            if (!have) {
                best = std::move(c);
                have = true;
                continue;
            }
            Ordering o = compare_candidates(alpha, c, best);
            if (o == Ordering::Less) {
                best = std::move(c);
            } else if (o == Ordering::Equal && !allow_ties) {
                throw Error(ErrorKind::TieDetected, "equal linear form values at height " + std::to_string(M) + ": " +
                                                        vec_string(best.exact->m) + " and " + vec_string(c.exact->m));
            }
        } while (advance());
    }
    if (!best.exact) best.exact = exact_record(alpha, best.mbar);
    return best;
}

}  // namespace

LinFormSequence enumerate_best_linform(const TargetVector& alpha, std::uint64_t M_max, const LinFormOptions& opt) {
    const size_t d = alpha.dim();
    if (d == 0) throw Error(ErrorKind::DomainError, "empty target");
    if (M_max < 1) throw Error(ErrorKind::DomainError, "M_max must be at least 1");
    if (static_cast<unsigned __int128>(M_max) * d >= (static_cast<unsigned __int128>(1) << 30))
        throw Error(ErrorKind::DomainError, "d * M_max exceeds the scan limit 2^30");
    const detail::FixedTarget f = detail::make_fixed(alpha);
    const unsigned workers = opt.workers == 0 ? 1 : opt.workers;

    LinFormSequence out;
    Candidate rec;
    bool have = false;
    for (std::uint64_t M0 = 1; M0 <= M_max; M0 += workers) {
        const std::uint64_t n = std::min<std::uint64_t>(workers, M_max - M0 + 1);
        std::vector<Candidate> res(n);
        std::vector<std::exception_ptr> errs(n);
        auto job = [&](std::uint64_t i) {
            try {
                res[i] = shell_best(alpha, f, static_cast<long>(M0 + i), opt.allow_ties);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        };
        if (n == 1) {
            job(0);
        } else {
            std::vector<std::thread> pool;
            for (std::uint64_t i = 0; i < n; ++i) pool.emplace_back(job, i);
            for (auto& t : pool) t.join();
        }
        for (std::uint64_t i = 0; i < n; ++i) {
            if (errs[i]) std::rethrow_exception(errs[i]);
            Candidate& c = res[i];
            if (!have) {
                rec = c;
                have = true;
                out.push_back(*c.exact);
                continue;
            }
            Ordering o = compare_candidates(alpha, c, rec);
            if (o == Ordering::Less) {
                rec = c;
                out.push_back(*c.exact);
            } else if (o == Ordering::Equal && !opt.allow_ties) {
                throw Error(ErrorKind::TieDetected,
                            "linear form at height " + std::to_string(M0 + i) + " ties with the current record");
            }
        }
    }
    return out;
}

CheckReport check_minkowski_linform(const LinFormSequence& seq, std::size_t d) {
    CheckReport r;
    r.name = "bo1";
    for (size_t nu = 0; nu + 1 < seq.size(); ++nu) {
        Int mp;
        mpz_pow_ui(mp.get_mpz_t(), seq[nu + 1].M.get_mpz_t(), d);
        r.le(nu, seq[nu].L * CertifiedReal(mp), CertifiedReal(1L));
    }
    return r;
}

std::size_t tail_span_rank(const LinFormSequence& seq, std::size_t k) {
    std::vector<IntVec> rows;
    for (size_t i = seq.size() > k ? seq.size() - k : 0; i < seq.size(); ++i) rows.push_back(seq[i].m);
    return rows.empty() ? 0 : rank(rows);
}

namespace {

Rat rat_pow(const Rat& x, long e) {
    Rat r = 1;
    Rat b = e >= 0 ? x : Rat(1 / x);
    for (long i = 0; i < std::labs(e); ++i) r *= b;
    return r;
}

// Returns an empty string when both preconditions hold, otherwise the failing one.
std::string reversal_precondition(const LinFormSequence& prefix, std::size_t d, const Rat& T) {
    const Int& Mmu = prefix.back().M;
    if (T * Rat(Mmu) > 1) return "T <= 1/M_mu fails (T M_mu = " + Rat(T * Rat(Mmu)).get_str() + ")";
    const Rat f = rat_pow(T, 1 - static_cast<long>(d));
    for (size_t k = 0; k < prefix.size(); ++k) {
        CertifiedReal p = CertifiedReal(f * Rat(prefix[k].M)) * prefix[k].L;
        if (!certified_lt(CertifiedReal(1L), p, "reversal scale"))
            return "T^(1-d) L_k M_k > 1 fails at k = " + std::to_string(k);
    }
    return {};
}

}  // namespace

Rat default_reversal_scale(const LinFormSequence& prefix, std::size_t d) {
    if (prefix.empty()) throw Error(ErrorKind::PreconditionViolated, "empty prefix");
    Rat T = 1;
    while (T * Rat(prefix.back().M) > 1) T /= 2;
    for (int i = 0; i < 4096; ++i) {
        std::string why = reversal_precondition(prefix, d, T);
        if (why.empty()) return T;
        if (d == 1) throw Error(ErrorKind::PreconditionViolated, why + "; no scale helps when d = 1");
        T /= 2;
    }
    throw Error(ErrorKind::PreconditionViolated, "no admissible power of 1/2 found");
}

ReversalResult reversal_transform(const LinFormSequence& prefix, std::size_t d, std::optional<Rat> T) {
    if (prefix.empty()) throw Error(ErrorKind::PreconditionViolated, "empty prefix");
    std::vector<IntVec> rows;
    for (const auto& v : prefix) rows.push_back(v.m);
    if (rank(rows) < d + 1) throw Error(ErrorKind::PreconditionViolated, "prefix lies in a proper linear subspace");
    ReversalResult res;
    if (T) {
        if (*T <= 0) throw Error(ErrorKind::PreconditionViolated, "T must be positive");
        std::string why = reversal_precondition(prefix, d, *T);
        if (!why.empty()) throw Error(ErrorKind::PreconditionViolated, why);
        res.T = *T;
    } else {
        res.T = default_reversal_scale(prefix, d);
    }
    const Rat Tmd = rat_pow(res.T, -static_cast<long>(d));
    res.relations.name = "reversal_relations";
    const size_t mu = prefix.size();
    for (size_t nu = 0; nu < mu; ++nu) {
        const LinFormVector& src = prefix[mu - 1 - nu];
        ReversedRecord r;
        r.m = src.m;
        r.source_index = mu - 1 - nu;
        int s = src.value.sign_or_throw("sign of linear form");
        if (s == 0) throw Error(ErrorKind::PreconditionViolated, "linear form vanishes at " + vec_string(src.m));
        Rat sg(s);
        r.z.push_back(CertifiedReal(sg * Tmd) * src.value);
        for (size_t j = 1; j <= d; ++j) r.z.push_back(CertifiedReal(sg * res.T * Rat(src.m[j])));
        Rat nm = 0;
        for (size_t j = 1; j <= d; ++j) {
            Rat a = abs(Rat(sg * res.T * Rat(src.m[j])));
            if (a > nm) nm = a;
        }
        r.zbar_norm = nm;
        ++res.relations.checked;
        if (certified_compare(r.z[0], CertifiedReal(Tmd) * src.L, Rat(1, Int(1) << precision_bits())) != Ordering::Equal)
            res.relations.fail(nu, "z_0 != T^-d L");
        if (nm != res.T * Rat(src.M)) res.relations.fail(nu, "|zbar| != T M");
        if (nu > 0 && !certified_lt(res.records.back().z[0], r.z[0], "reversal order"))
            res.relations.fail(nu, "z_0 not increasing");
        res.records.push_back(std::move(r));
    }
    return res;
}

Lemma2Report check_lemma2(const std::vector<ReversedRecord>& recs, std::size_t d) {
    Lemma2Report rep;
    rep.conclusion.name = "lemma2";
    const CertifiedReal eight_d2(Int(8 * static_cast<long>(d * d)));
    for (size_t nu = 0; nu + 1 < recs.size(); ++nu) {
        const ReversedRecord& a = recs[nu];
        const ReversedRecord& b = recs[nu + 1];
        if (a.zbar_norm > 1)
            throw Error(ErrorKind::PreconditionViolated, "|zbar_nu|_inf <= 1 fails at nu = " + std::to_string(nu));
        CertifiedReal prod = CertifiedReal(a.zbar_norm) * b.z[0];
        if (!certified_le(CertifiedReal(1L), prod, "lemma 2 hypothesis"))
            throw Error(ErrorKind::PreconditionViolated,
                        "|zbar_nu|_inf z_{0,nu+1} >= 1 fails at nu = " + std::to_string(nu));
        CertifiedReal gram(0L);
        for (size_t i = 0; i <= d; ++i)
            for (size_t j = i + 1; j <= d; ++j) {
                CertifiedReal mij = a.z[i] * b.z[j] - a.z[j] * b.z[i];
                gram = gram + mij * mij;
            }
        Int g = content(minors2(a.m, b.m));
        if (g == 0) throw Error(ErrorKind::DependentInput, "consecutive records are dependent");
        Rat g2 = Rat(g * g);
        rep.delta2_sq.push_back(gram.enclose(128) / Interval::point(g2));
        rep.conclusion.le(nu, gram, eight_d2 * CertifiedReal(g2) * prod * prod);
    }
    return rep;
}

CriteriaReport theorem1_criteria(const TargetVector& alpha, std::uint64_t q_max, std::uint64_t M_max,
                                 const CriteriaOptions& opt) {
    CriteriaReport r;
    const size_t d = alpha.dim();
    r.d = d;
    r.q_max = q_max;
    r.M_max = M_max;
    r.ratio_bound = opt.ratio_bound;
    SimulSequence s = enumerate_best_simul(alpha, q_max);
    LinFormOptions lo;
    lo.workers = opt.workers;
    LinFormSequence l = enumerate_best_linform(alpha, M_max, lo);
    r.simul_records = s.size();
    r.linform_records = l.size();
    r.sup_q_ratio = sup_q_ratio(s);
    r.inf_xi_ratio = inf_xi_ratio(s);
    r.simul_margin = badness_margin(s, d);

    r.sup_M_ratio = 0;
    bool have = false;
    for (size_t nu = 0; nu + 1 < l.size(); ++nu) {
        Rat mr(l[nu + 1].M, l[nu].M);
        mr.canonicalize();
        if (mr > r.sup_M_ratio) r.sup_M_ratio = mr;
        if (l[nu].L.is_exact_zero()) continue;
        Interval lr = l[nu + 1].L.enclose(128) / l[nu].L.enclose(128);
        r.inf_L_ratio = have ? imin(r.inf_L_ratio, lr) : lr;
        have = true;
    }
    if (!have) r.inf_L_ratio = Interval::point(0);

    CertifiedReal best;
    bool hb = false;
    for (size_t nu = 0; nu < l.size(); ++nu) {
        Int mp;
        mpz_pow_ui(mp.get_mpz_t(), l[nu].M.get_mpz_t(), d);
        CertifiedReal v = CertifiedReal(mp) * l[nu].L;
        if (!hb || compare_or_throw(v, best, "linear form margin") == Ordering::Less) {
            best = v;
            r.linform_margin.index = nu;
            hb = true;
        }
    }
    if (hb) r.linform_margin.value = best.enclose(128);

    r.consistent = r.sup_q_ratio <= opt.ratio_bound && r.sup_M_ratio <= opt.ratio_bound;
    r.verdict = r.consistent ? "consistent with badly approximable at this scale"
                             : "criterion (ii) violated at observed scale";
    return r;
}

}  // namespace dioph
