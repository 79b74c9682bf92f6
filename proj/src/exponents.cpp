#include "dioph/exponents.hpp"

#include <mpfr.h>

namespace dioph {

namespace {

Rat poly_residual(unsigned d, const Rat& c, const Rat& t) {
    Rat pw = 1, sum = 0;
    for (unsigned j = 0; j + 1 < d; ++j) {
        sum += pw;
        pw *= t;
    }
    return pw - c * sum;
}

Rat simplest_between(const Rat& lo, const Rat& hi) {
    Int fl = floor_rat(lo);
    if (Rat(fl) == lo) return lo;
    if (Rat(fl + 1) <= hi) return Rat(fl + 1);
    Rat inner = simplest_between(1 / (hi - Rat(fl)), 1 / (lo - Rat(fl)));
    return Rat(fl) + 1 / inner;
}

Rat mpfr_to_rat(const mpfr_t x) {
    Int z;
    mpfr_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), x);
    Rat r(z);
    if (e >= 0) {
        mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    } else {
        mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    }
    return r;
}

Rat log_bound(const Rat& x, mpfr_rnd_t rnd) {
    mpfr_t v;
    mpfr_init2(v, 128);
    mpfr_set_q(v, x.get_mpq_t(), rnd);
    mpfr_log(v, v, rnd);
    Rat r = mpfr_to_rat(v);
    mpfr_clear(v);
    return r;
}

}  // namespace

GdResult solve_Gd(unsigned d, const Rat& omega_hat) {
    if (d < 2) throw Error(ErrorKind::DomainError, "G_d needs d >= 2");
    if (omega_hat <= 0 || omega_hat >= 1)
        throw Error(ErrorKind::DomainError, "omega_hat = " + omega_hat.get_str() + " is outside (0, 1)");
    const Rat c = omega_hat / (1 - omega_hat);
    Rat lo = 0, hi = 1 + c;
    const Rat tol(1, Int(1) << 64);
    while (hi - lo > tol) {
        Rat mid = (lo + hi) / 2;
        Rat v = poly_residual(d, c, mid);
        if (v == 0) {
            lo = hi = mid;
            break;
        }
        (v < 0 ? lo : hi) = mid;
    }
    GdResult r;
    Rat s = simplest_between(lo, hi);
    if (poly_residual(d, c, s) == 0) {
        r.enclosure = Interval::point(s);
        r.midpoint = s;
        r.exact = true;
    } else {
        r.enclosure = Interval(lo, hi);
        r.midpoint = (lo + hi) / 2;
    }
    r.residual = abs(poly_residual(d, c, r.midpoint));
    return r;
}

Interval log_enclosure(const Interval& x) {
    if (x.lo <= 0) throw Error(ErrorKind::UndecidablePrecision, "logarithm of a value not certified positive");
    return Interval(log_bound(x.lo, MPFR_RNDD), log_bound(x.hi, MPFR_RNDU));
}

ExponentReport estimate_exponents(const SimulSequence& seq, std::size_t d, const ExponentOptions& opt) {
    if (seq.size() < 2) throw Error(ErrorKind::DomainError, "exponent estimates need at least two records");
    ExponentReport r;
    r.d = d;
    r.count = seq.size();
    r.low_confidence = seq.size() < 3;
    const size_t n_nu = seq.size() - 1;
    if (opt.range) {
        r.window_begin = std::min(opt.range->first, n_nu);
        r.window_end = std::min(opt.range->second, n_nu);
    } else {
        r.window_end = n_nu;
        r.window_begin = opt.window == 0 || opt.window >= n_nu ? 0 : n_nu - opt.window;
    }
    if (r.window_begin >= r.window_end) throw Error(ErrorKind::DomainError, "empty exponent window");

    std::vector<Interval> logq(seq.size());
    for (size_t i = 0; i < seq.size(); ++i) logq[i] = log_enclosure(Interval::point(Rat(seq[i].q)));

    bool have_w = false, have_f = false, have_o = false, have_tw = false, have_tf = false;
    for (size_t nu = 0; nu < n_nu; ++nu) {
        const bool in_window = nu >= r.window_begin && nu < r.window_end;
        if (!seq[nu].xi.is_exact_zero()) {
            Interval xi = seq[nu].xi.enclose(precision_bits() < 256 ? precision_bits() : 256);
            if (!xi.positive()) xi = seq[nu].xi.refine_to(xi.hi / Rat(Int(1) << 20));
            Interval mlx = -log_enclosure(xi);
            Interval e = mlx / logq[nu + 1];
            r.e.push_back(e);
            r.omega_full = have_f ? imax(r.omega_full, e) : e;
            r.omega_hat_full = have_f ? imin(r.omega_hat_full, e) : e;
            have_f = true;
            if (in_window) {
                r.omega_est = have_w ? imax(r.omega_est, e) : e;
                r.omega_hat_est = have_w ? imin(r.omega_hat_est, e) : e;
                have_w = true;
                if (seq[nu].q > 1) {
                    Interval o = mlx / logq[nu];
                    r.omega_ordinary_est = have_o ? imax(r.omega_ordinary_est, o) : o;
                    have_o = true;
                }
            }
        }
        if (seq[nu].q > 1) {
            Interval t = logq[nu + 1] / logq[nu];
            r.tau.push_back(t);
            r.tau_index.push_back(nu);
            r.tau_full = have_tf ? imax(r.tau_full, t) : t;
            have_tf = true;
            if (in_window) {
                r.tau_est = have_tw ? imax(r.tau_est, t) : t;
                have_tw = true;
            }
        }
    }
    if (!have_w || !have_tw) {
        r.low_confidence = true;
        if (!have_w) throw Error(ErrorKind::DomainError, "no positive remainders in the exponent window");
        if (!have_tw) r.tau_est = Interval::point(1);
    }
    if (r.e.size() < 2) r.low_confidence = true;
    Rat w = r.omega_hat_est.mid();
    if (d >= 2 && w > 0 && w < 1) r.G_d_value = solve_Gd(static_cast<unsigned>(d), w);
    return r;
}

Prop2Report check_prop2(const SimulSequence& seq) {
    Prop2Report rep;
    rep.bound.name = "prop2_determinant_bound";
    const size_t d = seq.empty() ? 0 : seq[0].a.size();
    if (d < 2) throw Error(ErrorKind::NoIndependentTriple, "dimension too small for independent triples");
    for (size_t nu = 1; nu + 1 < seq.size(); ++nu) {
        const ApproxVector& a = seq[nu - 1];
        const ApproxVector& b = seq[nu];
        const ApproxVector& c = seq[nu + 1];
        if (rank({a.vec(), b.vec(), c.vec()}) < 3) {
            rep.dependent.push_back(nu);
            continue;
        }
        bool found = false;
        for (size_t j1 = 0; j1 < d && !found; ++j1)
            for (size_t j2 = j1 + 1; j2 < d && !found; ++j2) {
                Int D = det3({a.q, a.a[j1], a.a[j2]}, {b.q, b.a[j1], b.a[j2]}, {c.q, c.a[j1], c.a[j2]});
                if (D == 0) continue;
                found = true;
                rep.triples.push_back({nu, j1, j2, D});
                CertifiedReal absD(Int(abs(D)));
                rep.bound.le(nu, CertifiedReal(1L), absD);
                rep.bound.le(nu, absD, CertifiedReal(6L) * a.xi * b.xi * CertifiedReal(c.q));
            }
        if (!found) rep.bound.fail(nu, "independent triple without a nonzero 3x3 determinant");
    }
    if (rep.triples.empty()) throw Error(ErrorKind::NoIndependentTriple, "no independent consecutive triple in range");
    return rep;
}

Prop3Report check_prop3(const Interval& omega, const Interval& omega_hat, const Interval& tau, std::size_t d) {
    Prop3Report r;
    // A link fails only when the enclosures certify lhs > rhs.
    auto link = [&](const std::string& name, const Interval& lhs, const Interval& rhs) {
        Prop3Link l{name, lhs.lo <= rhs.hi, lhs.mid(), rhs.mid()};
        r.all_hold = r.all_hold && l.holds;
        r.links.push_back(l);
    };
    if (omega_hat.lo > 0 && omega_hat.hi < 1 && d >= 2) {
        const unsigned dd = static_cast<unsigned>(d);
        Interval g(solve_Gd(dd, omega_hat.lo).enclosure.lo, solve_Gd(dd, omega_hat.hi).enclosure.hi);
        link("G_d(omega_hat) <= tau", g, tau);
    } else {
        r.links.push_back({"G_d(omega_hat) <= tau", false, omega_hat.mid(), tau.mid()});
        r.all_hold = false;
    }
    if (omega_hat.lo > 0) {
        Interval ratio = omega / omega_hat;
        link("tau <= omega/omega_hat", tau, ratio);
        link("omega/omega_hat <= d omega", ratio, Interval::point(Rat(static_cast<long>(d))) * omega);
    }
    auto bound = [&](const Rat& t) {
        Rat s = 0, p = 1;
        for (size_t j = 0; j < d; ++j) {
            s += p;
            p /= t;
        }
        return Rat(1 / s);
    };
    if (tau.lo > 0) link("omega_hat <= 1/sum tau^-j", omega_hat, Interval(bound(tau.lo), bound(tau.hi)));
    return r;
}

Prop3Report check_prop3(const Rat& omega, const Rat& omega_hat, const Rat& tau, std::size_t d) {
    return check_prop3(Interval::point(omega), Interval::point(omega_hat), Interval::point(tau), d);
}

Prop3Report check_prop3(const ExponentReport& rep, std::size_t d) {
    return check_prop3(rep.omega_ordinary_est, rep.omega_hat_est, rep.tau_est, d);
}

}  // namespace dioph
