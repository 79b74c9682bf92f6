#include "dioph/synth.hpp"

#include <exception>
#include <set>
#include <thread>

namespace dioph {

namespace {

std::vector<Rat> point_of(const IntVec& v) {
    std::vector<Rat> r;
    for (size_t j = 1; j < v.size(); ++j) {
        Rat x(v[j], v[0]);
        x.canonicalize();
        r.push_back(x);
    }
    return r;
}

Rat sup_dist(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    Rat m = 0;
    for (size_t j = 0; j < a.size(); ++j) {
        Rat d = abs(Rat(a[j] - b[j]));
        if (d > m) m = d;
    }
    return m;
}

Rat euclid_sq(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    Rat s = 0;
    for (size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return s;
}

Interval sqrt_iv(const Interval& x) {
    Interval lo = sqrt_enclosure(x.lo, 96), hi = sqrt_enclosure(x.hi, 96);
    return Interval(lo.lo, hi.hi);
}

void check_le(CheckReport& r, std::size_t idx, const Rat& lhs, const Rat& rhs, const std::string& what) {
    ++r.checked;
    if (!(lhs <= rhs)) r.fail(idx, what);
    if (rhs != 0) {
        Rat q = abs(Rat(lhs / rhs));
        if (!r.has_ratio || q > r.worst_ratio) r.worst_ratio = q;
        r.has_ratio = true;
    }
}

void check_true(CheckReport& r, std::size_t idx, bool ok, const std::string& what) {
    ++r.checked;
    if (!ok) r.fail(idx, what);
}

CheckReport named(const std::string& n) {
    CheckReport r;
    r.name = n;
    return r;
}

Int ipow(const Int& b, unsigned e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

// Lemma 4 hypotheses (poo), (i), (x1).
struct Hypotheses {
    std::string structural;  // (poo) or (i) failure, empty when they hold
    Int delta_sq;
    Rat diff;
    bool x1_volume = true;  // |V0 - V1| <= 1/(2 p0 Delta)
    bool x1_delta = true;   // |V0 - V1| <= delta(v0)/2
};

Hypotheses lemma4_hypotheses(const IntVec& v0, const IntVec& v1) {
    Hypotheses h;
    const Int& p0 = v0[0];
    const Int& p1 = v1[0];
    if (!(p1 > p0 && p0 >= 1)) {
        h.structural = "(poo) p1 > p0 >= 1 fails: p0 = " + p0.get_str() + ", p1 = " + p1.get_str();
        return h;
    }
    if (rank({v0, v1}) < 2) {
        h.structural = "(i) v0 and v1 are dependent";
        return h;
    }
    if (!is_complete(v0, v1)) {
        h.structural = "(i) the lattice spanned by v0, v1 is not complete";
        return h;
    }
    h.delta_sq = fundamental_volume_sq(v0, v1);
    h.diff = sup_dist(point_of(v0), point_of(v1));
    h.x1_volume = Rat(4) * Rat(p0 * p0 * h.delta_sq) * h.diff * h.diff <= 1;
    h.x1_delta = h.diff <= Rat(1, 4 * p0 * p0);
    return h;
}

std::string x1_volume_msg(const Rat& diff) {
    return "(x1) |V0 - V1| = " + rat_sci(diff, 4) + " exceeds 1/(2 p0 Delta)";
}

std::string x1_delta_msg(const Rat& diff) {
    return "(x1) |V0 - V1| = " + rat_sci(diff, 4) + " exceeds delta(v0)/2";
}

}  // namespace

std::string to_string(SynthMode m) { return m == SynthMode::Paper ? "paper" : "diagnostic"; }

Rat lemma3_delta(const IntVec& v) {
    if (v.empty() || v[0] < 1) throw Error(ErrorKind::PreconditionViolated, "first coordinate must be at least 1");
    if (!is_primitive(v)) throw Error(ErrorKind::NotPrimitive, vec_string(v) + " is not primitive");
    return Rat(Int(1), Int(2 * v[0] * v[0]));
}

Lemma4Result lemma4_extend(const IntVec& v0, const IntVec& v1, const Lemma4Constraints& c) {
    Lemma4Result res;
    Lemma4Trace& tr = res.trace;
    tr.v0 = v0;
    tr.v1 = v1;
    Hypotheses h = lemma4_hypotheses(v0, v1);
    if (!h.structural.empty()) throw Error(ErrorKind::PreconditionViolated, h.structural);
    if (!h.x1_volume) throw Error(ErrorKind::PreconditionViolated, x1_volume_msg(h.diff));
    if (!h.x1_delta && c.require_x1_delta) throw Error(ErrorKind::PreconditionViolated, x1_delta_msg(h.diff));
    tr.delta_sq = h.delta_sq;
    tr.x1_diff = h.diff;
    tr.x1 = named("x1");
    check_true(tr.x1, 0, h.x1_volume, x1_volume_msg(h.diff));
    check_true(tr.x1, 1, h.x1_delta, x1_delta_msg(h.diff));
    const Int& p0 = v0[0];
    const Int& p1 = v1[0];
    const Int& D2 = tr.delta_sq;

    // Third term of kappa: p_k^2 s / (p1 (1 + p1/p0)) >= Delta with s = |p0 (V2 - V1)|_inf.
    Rat s = Rat(p0) * sup_dist(point_of(add(v0, v1)), point_of(v1));
    Rat third_den = Rat(p1) * (1 + frac(p1, p0));
    Interval delta = sqrt_enclosure(Rat(D2), 96);
    {
        Interval t1 = Interval::point(Rat(D2));
        Interval t2 = Interval::point(Rat(p0)) * sqrt_iv(Interval::point(Rat(2)) * delta);
        Interval t3 = sqrt_iv(delta * Interval::point(third_den / s));
        tr.kappa = imax(t1, imax(t2, t3));
    }
    auto kappa_ok = [&](const Int& pk) {
        if (pk < D2) return false;
        if (ipow(pk, 4) < 4 * ipow(p0, 4) * D2) return false;
        Rat u = Rat(pk * pk) * s / third_den;
        return u * u >= Rat(D2);
    };
    auto admissible = [&](const Int& pk) {
        if (!kappa_ok(pk)) return false;
        for (const Int& th : c.extra_thresholds)
            if (pk < th) return false;
        return true;
    };
    res.v = {v0, v1};
    size_t i = 1;
    while (i < c.min_k || !admissible(res.v[i][0])) {
        res.v.push_back(add(res.v[i], res.v[i - 1]));
        ++i;
    }
    const size_t k = i;
    tr.k = k;
    tr.u = named("u");
    check_true(tr.u, k, kappa_ok(res.v[k][0]), "p_k below kappa");

    const std::vector<Rat> Vk = point_of(res.v[k]);
    for (size_t j = 0; j <= k; ++j) {
        const IntVec& v = res.v[j];
        Rat m = 0;
        for (size_t l = 1; l < v.size(); ++l) {
            Rat y = abs(Rat(Rat(v[0]) * Vk[l - 1] - Rat(v[l])));
            if (y > m) m = y;
        }
        tr.y_norms.push_back(m);
    }
    const auto& y = tr.y_norms;
    tr.additivity = named("remainder_additivity");
    tr.x6 = named("x6");
    tr.x61 = named("x61");
    tr.l2 = named("l2");
    tr.laci = named("laci");
    for (size_t j = 1; j + 1 <= k - 1 + 1 && j + 1 <= k; ++j)
        if (j <= k - 1) check_true(tr.additivity, j, y[j - 1] == y[j] + y[j + 1], "|y_{i-1}| != |y_i| + |y_{i+1}|");
    for (size_t j = 1; j + 1 <= k; ++j) check_le(tr.x6, j, y[j - 1] / 2, y[j], "ratio below 1/2");
    for (size_t j = 1; j + 2 <= k; ++j) check_le(tr.x61, j, y[j], Rat(2, 3) * y[j - 1], "ratio above 2/3");
    for (size_t j = 0; j + 1 <= k; ++j) {
        Int pn = res.v[j + 1][0];
        check_le(tr.l2, j, Rat(D2), Rat(24 * pn * pn) * y[j] * y[j], "|y_i| below Delta/(2 sqrt6 p_{i+1})");
    }
    const Int& pk = res.v[k][0];
    bool first = true;
    for (size_t j = 1; j + 1 <= k; ++j) {
        Rat e_j = Rat(res.v[j][0]) * delta.hi / Rat(100 * pk * pk);
        Rat e_jm = Rat(res.v[j - 1][0]) * delta.hi / Rat(100 * pk * pk);
        Rat lower = (y[j] - e_j) / (y[j - 1] + e_jm);
        if (first || lower < tr.laci_min) tr.laci_min = lower;
        first = false;
        check_le(tr.laci, j, Rat(1, 4), lower, "ratio bound below 1/4 on the x3 ball");
    }
    for (size_t j = 1; j <= k; ++j)
        tr.sigma.push_back(1 + (y[j] / y[j - 1]) * frac(res.v[j - 1][0], res.v[j][0]));
    return res;
}

Lemma5Result lemma5_lift(const IntVec& w0p, const IntVec& w0pp, const Int& gamma1, const Int& gamma2, bool flip) {
    Lemma5Result res;
    Lemma5Trace& tr = res.trace;
    tr.w0p = w0p;
    tr.w0pp = w0pp;
    tr.gamma1 = gamma1;
    tr.gamma2 = gamma2;
    tr.gammaI = named("gammaI");
    check_true(tr.gammaI, 0, gamma2 >= gamma1 * gamma1 && gamma1 >= 50, "gamma2 >= gamma1^2 and gamma1 >= 50");
    if (!tr.gammaI.pass)
        throw Error(ErrorKind::PreconditionViolated, "(gammaI) fails for gamma1 = " + gamma1.get_str() +
                                                         ", gamma2 = " + gamma2.get_str());
    if (w0p.size() != 3 || w0pp.size() != 3) throw Error(ErrorKind::DomainError, "lift works in Z^3");
    tr.w0 = add(w0p, w0pp);
    const Int& p0 = tr.w0[0];
    IntVec n = cross(w0p, w0pp);
    Int first = 0;
    for (const Int& x : n)
        if (x != 0) {
            first = x;
            break;
        }
    if (first == 0) throw Error(ErrorKind::DependentInput, "w0' and w0'' are dependent");
    if (first < 0) n = scale(Int(-1), n);
    if (flip) n = scale(Int(-1), n);
    tr.flipped = flip;
    tr.n_scaled = n;
    const Int D2 = dot(n, n);
    tr.delta_sq = D2;
    if (content(n) != 1) throw Error(ErrorKind::PreconditionViolated, "w0', w0'' do not form a basis of their plane's lattice");
    if (!is_primitive(tr.w0)) throw Error(ErrorKind::PreconditionViolated, "w0 is not primitive");
    tr.del = named("del");
    check_le(tr.del, 0, Rat(gamma1 * D2), Rat(p0), "p0 >= gamma1 Delta^2");
    if (!tr.del.pass)
        throw Error(ErrorKind::PreconditionViolated,
                    "(del) p0 = " + p0.get_str() + " < gamma1 Delta^2 = " + Int(gamma1 * D2).get_str());

    const Rat gp = Rat(gamma1 * p0);
    for (size_t j = 0; j < 3; ++j) tr.x0.push_back(Rat(tr.w0[j]) + Rat(n[j]) / gp);
    for (size_t j = 0; j < 3; ++j) tr.X0.push_back(tr.x0[j] * gp / Rat(D2));

    // Integer point g on n . x = 1.
    Int s1, t1, g1, s2, t2, g2;
    mpz_gcdext(g1.get_mpz_t(), s1.get_mpz_t(), t1.get_mpz_t(), n[0].get_mpz_t(), n[1].get_mpz_t());
    mpz_gcdext(g2.get_mpz_t(), s2.get_mpz_t(), t2.get_mpz_t(), g1.get_mpz_t(), n[2].get_mpz_t());
    if (g2 != 1) throw Error(ErrorKind::InternalCertificateFailure, "normal vector is not primitive");
    tr.g = {s2 * s1, s2 * t1, t2};
    if (dot(n, tr.g) != 1) throw Error(ErrorKind::InternalCertificateFailure, "extended gcd produced a wrong point");

    std::vector<Rat> u(3);
    for (size_t j = 0; j < 3; ++j) u[j] = tr.X0[j] - Rat(tr.g[j]);
    size_t r = 0, s = 1;
    Int minor = 0;
    for (size_t a = 0; a < 3 && minor == 0; ++a)
        for (size_t b = a + 1; b < 3 && minor == 0; ++b) {
            minor = w0p[a] * w0pp[b] - w0p[b] * w0pp[a];
            r = a;
            s = b;
        }
    tr.lambda = (u[r] * Rat(w0pp[s]) - u[s] * Rat(w0pp[r])) / Rat(minor);
    tr.mu = (Rat(w0p[r]) * u[s] - Rat(w0p[s]) * u[r]) / Rat(minor);
    for (size_t j = 0; j < 3; ++j)
        if (u[j] != tr.lambda * Rat(w0p[j]) + tr.mu * Rat(w0pp[j]))
            throw Error(ErrorKind::InternalCertificateFailure, "X0 - g does not lie in the plane of w0', w0''");
    const Int cl = ceil_rat(tr.lambda), cm = ceil_rat(tr.mu);
    tr.w1 = add(tr.g, add(scale(cl, w0p), scale(cm, w0pp)));
    const IntVec& w1 = tr.w1;
    const Int& p1 = w1[0];

    tr.in_plane = named("w1_in_shifted_plane");
    check_true(tr.in_plane, 0, dot(n, w1) == 1, "n . w1 != 1");
    tr.parallelogram = named("w1_in_parallelogram");
    check_true(tr.parallelogram, 0, Rat(cl) - tr.lambda >= 0 && Rat(cl) - tr.lambda < 1, "lambda offset outside [0,1)");
    check_true(tr.parallelogram, 1, Rat(cm) - tr.mu >= 0 && Rat(cm) - tr.mu < 1, "mu offset outside [0,1)");
    tr.det_prime = det3(w0p, tr.w0, w1);
    tr.det_second = det3(w0pp, tr.w0, w1);
    tr.bases = named("unimodular_triples");
    check_true(tr.bases, 0, abs(tr.det_prime) == 1, "det(w0', w0, w1) != +-1");
    check_true(tr.bases, 1, abs(tr.det_second) == 1, "det(w0'', w0, w1) != +-1");
    tr.complete = named("new_plane_complete");
    check_true(tr.complete, 0, is_complete(tr.w0, w1), "w0, w1 do not span a complete lattice");
    tr.delta1_sq = fundamental_volume_sq(tr.w0, w1);
    const Int& D1 = tr.delta1_sq;
    const Rat g = Rat(gamma1);
    const Rat pq = frac(p0 * p0, D2);

    tr.w1_bounds = named("w1");
    check_le(tr.w1_bounds, 0, (g - 2 / g) * pq, Rat(p1), "p1 below (gamma1 - 2/gamma1)(p0/Delta)^2");
    check_le(tr.w1_bounds, 1, Rat(p1), (g + 2 / g) * pq, "p1 above (gamma1 + 2/gamma1)(p0/Delta)^2");
    tr.w2_bounds = named("w2");
    check_le(tr.w2_bounds, 0, Rat(p0 * p0), Rat(16 * D2 * D1), "Delta1 below p0/(4 Delta)");
    check_le(tr.w2_bounds, 1, Rat(D1 * D2), Rat(144 * p0 * p0), "Delta1 above 12 p0/Delta");

    const std::vector<Rat> W0 = point_of(tr.w0), W1 = point_of(w1);
    const std::vector<Rat> x0p{tr.x0[1] / tr.x0[0], tr.x0[2] / tr.x0[0]};
    const Rat p0_4 = Rat(ipow(p0, 4));
    tr.remark4 = named("remark4");
    check_le(tr.remark4, 0, euclid_sq(x0p, W0), Rat(4 * D2) / (g * g * p0_4), "|x0 - W0| above 2 Delta/(gamma1 p0^2)");
    tr.remark5 = named("remark5");
    check_le(tr.remark5, 0, Rat(D2 * p1 * p1), Rat(64 * p0 * p0 * D1), "Delta1/p1 below Delta/(8 p0)");
    check_le(tr.remark5, 1, Rat(D1 * p0 * p0), Rat(576 * D2 * p1 * p1), "Delta1/p1 above 24 Delta/p0");
    tr.remark5_scaled = named("remark5_scaled");
    check_le(tr.remark5_scaled, 0, Rat(D2 * p1 * p1), g * g * Rat(64 * p0 * p0 * D1),
             "Delta1/p1 below Delta/(8 gamma1 p0)");
    check_le(tr.remark5_scaled, 1, g * g * Rat(D1 * p0 * p0), Rat(576 * D2 * p1 * p1),
             "Delta1/p1 above 24 Delta/(gamma1 p0)");
    tr.remark6 = named("remark6");
    check_le(tr.remark6, 0, g * pq / 2, Rat(p1), "p1 below (gamma1/2) p0^2/Delta^2");
    check_le(tr.remark6, 1, g * Rat(p0) / 2, Rat(p1), "p1 below (gamma1/2) p0");
    tr.remark7 = named("remark7");
    check_le(tr.remark7, 0, euclid_sq(W0, W1), Rat(9 * D2) / (g * g * p0_4), "|W0 - W1| above 3 Delta/(gamma1 p0^2)");
    tr.oooo = named("lift_point_near_x0");
    check_le(tr.oooo, 0, euclid_sq(W1, x0p), Rat(256 * D2) / (g * g * g * g * p0_4),
             "|W1 - x0| above 16 Delta/(gamma1^2 p0^2)");

    if (!tr.w1_bounds.pass || !tr.w2_bounds.pass || !tr.in_plane.pass || !tr.bases.pass || !tr.complete.pass) {
        std::string d = !tr.w1_bounds.pass ? tr.w1_bounds.detail
                        : !tr.w2_bounds.pass ? tr.w2_bounds.detail
                        : !tr.in_plane.pass  ? tr.in_plane.detail
                        : !tr.bases.pass     ? tr.bases.detail
                                             : tr.complete.detail;
        throw Error(ErrorKind::InternalCertificateFailure, "lift certificate failed: " + d);
    }
    res.w1 = w1;
    return res;
}

Box make_box(const std::vector<IntVec>& z, std::size_t anchor, const Int& gamma) {
    if (anchor < 1 || anchor >= z.size()) throw Error(ErrorKind::DomainError, "anchor out of range");
    Box b;
    b.anchor = anchor;
    const IntVec& v = z[anchor - 1];
    b.q = v[0];
    b.cx = Rat(v[1], v[0]);
    b.cy = Rat(v[2], v[0]);
    b.cx.canonicalize();
    b.cy.canonicalize();
    b.delta_sq = fundamental_volume_sq(v, z[anchor]);
    Rat den = Rat(24 * gamma * gamma * b.q * b.q);
    b.radius = sqrt_enclosure(Rat(b.delta_sq), 128 + 2 * static_cast<unsigned>(mpz_sizeinbase(b.q.get_mpz_t(), 2))) /
               Interval::point(den);
    return b;
}

ConstructionState rebuild_state(SynthMode mode, const Int& gamma, std::vector<IntVec> z,
                                std::vector<std::size_t> anchors) {
    if (z.size() < 2) throw Error(ErrorKind::DomainError, "need at least two vectors");
    if (anchors.empty() || anchors[0] != 1) throw Error(ErrorKind::DomainError, "first anchor must be 1");
    for (size_t t = 0; t < anchors.size(); ++t) {
        if (t > 0 && anchors[t] <= anchors[t - 1] + 2)
            throw Error(ErrorKind::DomainError, "anchors must increase by at least 3");
        if (anchors[t] + 1 > z.size()) throw Error(ErrorKind::DomainError, "anchor without a successor vector");
    }
    for (const IntVec& v : z)
        if (v.size() != 3 || v[0] < 1) throw Error(ErrorKind::DomainError, "vectors must be (q, a1, a2) with q >= 1");
    ConstructionState st;
    st.mode = mode;
    st.gamma = gamma;
    st.z = std::move(z);
    st.anchors = std::move(anchors);
    for (size_t a : st.anchors) {
        st.boxes.push_back(make_box(st.z, a, gamma));
        st.delta_sq.push_back(st.boxes.back().delta_sq);
    }
    return st;
}

ConstructionState run_construction(const ConstructionOptions& opt) {
    const IntVec& s0 = opt.seed0;
    const IntVec& s1 = opt.seed1;
    if (s0.size() != 3 || s1.size() != 3) throw Error(ErrorKind::DomainError, "seed vectors must lie in Z^3");
    Hypotheses h = lemma4_hypotheses(s0, s1);
    if (!h.structural.empty()) throw Error(ErrorKind::PreconditionViolated, "seed: " + h.structural);
    if (!h.x1_volume || !h.x1_delta)
        throw Error(ErrorKind::PreconditionViolated, "seed: " + (h.x1_volume ? x1_delta_msg(h.diff) : x1_volume_msg(h.diff)));
    Int gamma;
    Int ratio_ceil = ceil_rat(frac(s1[0], s0[0]));
    if (opt.mode == SynthMode::Paper) {
        gamma = ratio_ceil > 400 ? ratio_ceil : Int(400);
    } else {
        gamma = opt.gamma;
        if (gamma < 50) throw Error(ErrorKind::PreconditionViolated, "(gammaI) needs gamma >= 50");
        if (gamma < ratio_ceil) throw Error(ErrorKind::PreconditionViolated, "gamma must be at least q2/q1");
    }
    std::vector<IntVec> z{s0, s1};
    std::vector<size_t> anchors{1};
    std::vector<StepRecord> steps;
    const Int gamma2 = gamma * gamma;
    const Int a = 50 * gamma2 + 1;
    for (size_t t = 1; t <= opt.t_max; ++t) {
        const size_t i = anchors.back();
        const IntVec v0 = z[i - 1], v1 = z[i];
        StepRecord rec;
        rec.t = t;
        rec.i_t = i;
        rec.a = a;
        rec.delta_sq = fundamental_volume_sq(v0, v1);
        Lemma4Constraints c;
        c.require_x1_delta = false;
        c.extra_thresholds.push_back(gamma * rec.delta_sq);
        c.extra_thresholds.push_back(gamma * v0[0]);
        if (opt.growth_schedule) c.extra_thresholds.push_back((Int(1) << (2 * t)) * gamma * rec.delta_sq);
        if (opt.stretch_power > 0)
            c.extra_thresholds.push_back(ipow(gamma * rec.delta_sq, opt.stretch_power << (t - 1)));
        Lemma4Result l4 = lemma4_extend(v0, v1, c);
        const size_t k = l4.trace.k;
        rec.k_t = k;
        const Int& pk = l4.v[k][0];
        rec.qqu = named("qqu");
        check_le(rec.qqu, t, Rat(gamma * rec.delta_sq), Rat(pk), "q_{i_t+k_t} < gamma Delta_t^2");
        rec.qqu1 = named("qqu1");
        check_le(rec.qqu1, t, Rat(gamma * v0[0]), Rat(pk), "q_{i_t+k_t} < gamma q_{i_t}");
        rec.growth = named("growth_schedule");
        if (opt.growth_schedule)
            check_le(rec.growth, t, Rat((Int(1) << (2 * t)) * gamma * rec.delta_sq), Rat(pk),
                     "q_{i_t+k_t} < 4^t gamma Delta_t^2");
        else
            rec.growth.skipped = true;
        for (size_t j = 2; j <= k; ++j) z.push_back(l4.v[j]);
        bool flip = t - 1 < opt.branch_bits.size() && opt.branch_bits[t - 1];
        Lemma5Result l5 = lemma5_lift(l4.v[k - 2], l4.v[k - 1], gamma, gamma2, flip);
        const IntVec& w0 = l4.v[k];
        const IntVec& w1 = l5.w1;
        IntVec mid = sub(w1, w0);
        z.push_back(mid);
        z.push_back(w1);
        z.push_back(add(mid, scale(a, w1)));
        for (const Int& x : z.back())
            if (mpz_sizeinbase(x.get_mpz_t(), 2) > opt.bit_budget)
                throw Error(ErrorKind::StepTooLarge, "step " + std::to_string(t) + " exceeds the bit budget of " +
                                                         std::to_string(opt.bit_budget));
        anchors.push_back(i + k + 2);
        rec.max_q_ratio = 0;
        for (size_t nu = i; nu + 1 <= anchors.back() && nu < z.size(); ++nu) {
            Rat rq(z[nu][0], z[nu - 1][0]);
            rq.canonicalize();
            if (rq > rec.max_q_ratio) rec.max_q_ratio = rq;
        }
        rec.lemma4 = std::move(l4.trace);
        rec.lemma5 = std::move(l5.trace);
        steps.push_back(std::move(rec));
    }
    ConstructionState st = rebuild_state(opt.mode, gamma, std::move(z), std::move(anchors));
    st.growth_schedule = opt.growth_schedule;
    st.steps = std::move(steps);
    st.branch_bits = opt.branch_bits;
    return st;
}

namespace {

Rat xi_at(const IntVec& v, const Rat& x1, const Rat& x2) {
    Rat a = abs(Rat(Rat(v[0]) * x1 - Rat(v[1])));
    Rat b = abs(Rat(Rat(v[0]) * x2 - Rat(v[2])));
    return a > b ? a : b;
}

}  // namespace

SimulSequence constructed_sequence(const ConstructionState& state, const Rat& x1, const Rat& x2) {
    SimulSequence out;
    for (const IntVec& v : state.z) {
        ApproxVector r;
        r.q = v[0];
        r.a = {v[1], v[2]};
        r.xi = CertifiedReal(xi_at(v, x1, x2));
        out.push_back(std::move(r));
    }
    return out;
}

TargetVector box_centre_target(const ConstructionState& state) {
    const Box& b = state.boxes.back();
    return make_target({CertifiedReal(b.cx), CertifiedReal(b.cy)});
}

VerifyReport verify_conditions(const ConstructionState& st, const VerifyOptions& opt) {
    VerifyReport rep;
    const Int& gamma = st.gamma;
    const Int gamma2 = gamma * gamma;
    auto q_of = [&](size_t nu) -> const Int& { return st.z[nu - 1][0]; };

    rep.A = named("condition_A");
    rep.aq_first = named("aq_first_anchor");
    for (size_t t = 0; t < st.anchors.size(); ++t) {
        const size_t i = st.anchors[t];
        const IntVec& v0 = st.z[i - 1];
        const IntVec& v1 = st.z[i];
        Hypotheses h = lemma4_hypotheses(v0, v1);
        const std::string at = " at anchor " + std::to_string(i);
        check_true(rep.A, t + 1, h.structural.empty(), h.structural + at);
        if (!h.structural.empty()) continue;
        check_true(rep.A, t + 1, h.x1_volume, x1_volume_msg(h.diff) + at);
        check_true(rep.A, t + 1, h.x1_delta, x1_delta_msg(h.diff) + at);
        Rat lhs = h.diff * Rat(30 * gamma2 * v0[0] * v0[0]);
        CheckReport& target = t == 0 ? rep.aq_first : rep.A;
        check_le(target, t + 1, lhs * lhs, Rat(h.delta_sq), "(aq) |A_i - A_{i+1}| above Delta/(30 gamma^2 q^2)" + at);
    }

    rep.nested = named("nested_boxes");
    rep.nested_first = named("second_box_inside_first");
    for (size_t t = 1; t < st.boxes.size(); ++t) {
        const Box& a = st.boxes[t - 1];
        const Box& b = st.boxes[t];
        Rat off = std::max(abs(Rat(b.cx - a.cx)), abs(Rat(b.cy - a.cy)));
        check_le(t == 1 ? rep.nested_first : rep.nested, t, off + b.radius.hi, a.radius.lo, "box " + std::to_string(t + 1) + " not inside box " +
                                                                    std::to_string(t));
    }

    // Condition (D) on every box B_t for 2 <= nu <= i_t - 1.
    ConditionDReport& D = rep.D;
    D.box = named("condition_D");
    const Int K = 50 * gamma2 + 2;
    D.constant = Interval::point(1) / (Interval::point(Rat(16 * K)) * sqrt_enclosure(Rat(6), 96));
    bool have_mid = false;
    for (size_t t = 0; t < st.boxes.size(); ++t) {
        const Box& b = st.boxes[t];
        const bool last = t + 1 == st.boxes.size();
        for (size_t nu = 2; nu + 1 <= b.anchor; ++nu) {
            Rat xm = xi_at(st.z[nu - 1], b.cx, b.cy);
            Rat xp = xi_at(st.z[nu - 2], b.cx, b.cy);
            Rat num = xm - Rat(q_of(nu)) * b.radius.hi;
            Rat den = xp + Rat(q_of(nu - 1)) * b.radius.hi;
            ++D.box.checked;
            bool ok = num > 0 && Rat(1536 * K * K) * num * num >= den * den;
            if (!ok)
                D.box.fail(nu, "xi_nu/xi_{nu-1} lower bound below 1/(16 sqrt6 (50 gamma^2 + 2)) at nu = " +
                                   std::to_string(nu) + " on box " + std::to_string(t + 1));
            if (last) {
                D.ratio_lower.push_back(Interval::point(num / den));
                if (xp > 0) {
                    Rat r = xm / xp;
                    D.mid_ratio.push_back(r);
                    if (!have_mid || r < D.min_mid_ratio) D.min_mid_ratio = r;
                    have_mid = true;
                }
            }
        }
    }

    // Certificate path for (B) and (C).
    rep.cert_remark5_link = named("next_box_inside_lift_ball");
    rep.cert_x3_containment = named("lift_ball_inside_stretch_ball");
    rep.cert_lemma5_ball = named("lemma5_ball_inside_stretch_ball");
    rep.cert_lift = named("lift_step_size");
    for (size_t t = 0; t + 1 < st.anchors.size(); ++t) {
        const size_t inext = st.anchors[t + 1];
        const Int& Dt = st.delta_sq[t];
        const Int& Dn = st.delta_sq[t + 1];
        const Int& p0 = q_of(inext - 2);
        const Int& p1 = q_of(inext);
        check_le(rep.cert_remark5_link, t + 1, Rat(Dn * p0 * p0), Rat(576 * Dt * p1 * p1),
                 "box radius exceeds Delta_t/(gamma^2 p0 p1)");
        check_le(rep.cert_lemma5_ball, t + 1, Rat(3, gamma), Rat(1, 100), "3/gamma above 1/100");
        const Box& bn = st.boxes[t + 1];
        std::vector<Rat> A0 = point_of(st.z[inext - 3]), A1 = point_of(st.z[inext - 1]);
        Interval dt = sqrt_enclosure(Rat(Dt), 96);
        check_le(rep.cert_x3_containment, t + 1, (sup_dist(A0, A1) + bn.radius.hi) * Rat(100 * p0 * p0), dt.lo,
                 "next box not inside the x3 ball of the stretch");
        check_le(rep.cert_lift, t + 1, euclid_sq(A0, A1) * Rat(gamma2 * p0 * p0 * p0 * p0), Rat(9 * Dt),
                 "|A_{i-2} - A_i| above 3 Delta/(gamma p0^2)");
    }
    rep.certificate_path = rep.A.pass && rep.nested.pass && rep.cert_remark5_link.pass && rep.cert_lemma5_ball.pass &&
                           rep.cert_x3_containment.pass && rep.cert_lift.pass;

    // Oracle path.
    const Box& fb = st.boxes.back();
    Int qmax = fb.q;
    rep.oracle_limit = qmax < Int(static_cast<unsigned long>(opt.oracle_budget)) ? qmax
                                                                              : Int(static_cast<unsigned long>(opt.oracle_budget));
    rep.certificate_only = qmax > Int(static_cast<unsigned long>(opt.oracle_budget));
    if (!opt.run_oracle) return rep;
    rep.oracle_run = true;
    const Rat r = fb.radius.lo;
    struct Pt {
        std::string label;
        Rat x, y;
    };
    std::vector<Pt> pts{{"centre", fb.cx, fb.cy},
                        {"corner(-,-)", fb.cx - r, fb.cy - r},
                        {"corner(-,+)", fb.cx - r, fb.cy + r},
                        {"corner(+,-)", fb.cx + r, fb.cy - r},
                        {"corner(+,+)", fb.cx + r, fb.cy + r}};
    std::set<std::string> constructed;
    for (const IntVec& v : st.z) constructed.insert(vec_string(v));
    const std::uint64_t limit = rep.oracle_limit.get_ui();
    rep.samples.resize(pts.size());
    std::vector<std::exception_ptr> errs(pts.size());
    auto job = [&](size_t s) {
        try {
            SampleResult& sr = rep.samples[s];
            sr.label = pts[s].label;
            sr.x1 = pts[s].x;
            sr.x2 = pts[s].y;
            sr.scanned_to = rep.oracle_limit;
            TargetVector tv = make_target({CertifiedReal(sr.x1), CertifiedReal(sr.x2)});
            SimulOptions so;
            so.allow_ties = true;
            SimulSequence found = enumerate_best_simul(tv, limit, so);
            std::set<std::string> found_set;
            for (const ApproxVector& f : found) {
                sr.found_q.push_back(f.q);
                IntVec v = f.vec();
                found_set.insert(vec_string(v));
                if (f.q >= st.z[0][0] && !constructed.count(vec_string(v))) {
                    if (sr.B_ok) sr.detail = "best approximation " + vec_string(v) + " missing from the construction";
                    sr.B_ok = false;
                }
            }
            for (size_t nu = 0; nu + 1 < st.z.size(); ++nu) {
                if (st.z[nu + 1][0] > rep.oracle_limit) break;
                if (!found_set.count(vec_string(st.z[nu])) && !found_set.count(vec_string(st.z[nu + 1]))) {
                    if (sr.C_ok && sr.B_ok)
                        sr.detail = "neither z_" + std::to_string(nu + 1) + " nor z_" + std::to_string(nu + 2) +
                                    " is a best approximation";
                    sr.C_ok = false;
                }
            }
            for (size_t t = 0; t + 1 < st.anchors.size(); ++t) {
                const size_t inext = st.anchors[t + 1];
                const IntVec& vk1 = st.z[inext - 4];  // v_{k-1}
                const IntVec& midv = st.z[inext - 2];  // w1 - w0
                if (vk1[0] > rep.oracle_limit || st.z[inext - 3][0] > rep.oracle_limit)
                    sr.stretch_pattern.push_back("beyond scan");
                else
                    sr.stretch_pattern.push_back(found_set.count(vec_string(vk1)) ? "x5" : "x51");
                if (st.z[inext - 1][0] > rep.oracle_limit)
                    sr.lift_middle.push_back("beyond scan");
                else
                    sr.lift_middle.push_back(found_set.count(vec_string(midv)) ? "w1-w0 present" : "w1-w0 absent");
            }
        } catch (...) {
            errs[s] = std::current_exception();
        }
    };
    if (opt.workers > 1) {
        std::vector<std::thread> pool;
        for (size_t s = 0; s < pts.size(); ++s) pool.emplace_back(job, s);
        for (auto& th : pool) th.join();
    } else {
        for (size_t s = 0; s < pts.size(); ++s) job(s);
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    for (const SampleResult& sr : rep.samples) {
        rep.B_oracle = rep.B_oracle && sr.B_ok;
        rep.C_oracle = rep.C_oracle && sr.C_ok;
    }
    return rep;
}

EmittedAlpha emit_alpha(const ConstructionState& state, int digits) {
    if (digits < 1) throw Error(ErrorKind::DomainError, "digits must be positive");
    const Box& b = state.boxes.back();
    Int p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    const Rat ulp(Int(1), p10);
    if (2 * b.radius.hi >= ulp)
        throw Error(ErrorKind::InsufficientDepth, "box width " + rat_sci(2 * b.radius.hi, 3) + " is not below 1e-" +
                                                      std::to_string(digits));
    EmittedAlpha out;
    Rat worst = 0;
    for (const Rat& c : {b.cx, b.cy}) {
        Rat m = Rat(round_nearest(c * Rat(p10)), p10);
        m.canonicalize();
        out.mid.push_back(m);
        Rat e = abs(Rat(c - m));
        if (e > worst) worst = e;
    }
    // Radius rounded up to a few significant decimal digits beyond the requested precision.
    Int p10r;
    const int rd = digits + 6;
    mpz_ui_pow_ui(p10r.get_mpz_t(), 10, static_cast<unsigned long>(rd));
    Int num = ceil_rat((worst + b.radius.hi) * Rat(p10r));
    out.radius = Rat(num, p10r);
    out.radius.canonicalize();
    std::string rad = num.get_str() + "e-" + std::to_string(rd);
    for (size_t j = 0; j < out.mid.size(); ++j) {
        if (j) out.target += ",";
        out.target += "dec:" + rat_decimal(out.mid[j], digits) + "~" + rad;
    }
    return out;
}

}  // namespace dioph
