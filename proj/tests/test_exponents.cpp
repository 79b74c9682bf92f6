#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dioph/cf1d.hpp"
#include "dioph/exponents.hpp"

using namespace dioph;

namespace {

// Records built from convergents, dropping the last two of a finite expansion.
SimulSequence from_cf(const CFExpansion& e) {
    SimulSequence seq;
    for (size_t i = 0; i + 2 < e.terms(); ++i) {
        if (i + 1 < e.terms() && e.convergents[i + 1].second == e.convergents[i].second) continue;
        seq.push_back({e.convergents[i].second, {e.convergents[i].first}, e.remainders[i]});
    }
    return seq;
}

Rat residual(unsigned d, const Rat& w, const Rat& t) {
    Rat c = w / (1 - w), lhs = 1, s = 0, p = 1;
    for (unsigned i = 0; i + 1 < d; ++i) lhs *= t;
    for (unsigned i = 0; i + 1 < d; ++i) {
        s += p;
        p *= t;
    }
    return abs(lhs - c * s);
}

}  // namespace

TEST_CASE("G_d closed forms") {
    GdResult a = solve_Gd(2, Rat(1, 2));
    CHECK(a.exact);
    CHECK(a.midpoint == 1);
    GdResult b = solve_Gd(2, Rat(2, 3));
    CHECK(b.exact);
    CHECK(b.midpoint == 2);
    GdResult c = solve_Gd(3, Rat(1, 2));
    // (1 + sqrt 5)/2 = 1.6180339887498948482...
    CHECK(c.enclosure.lo < Rat(16180339887498949, Int("10000000000000000")));
    CHECK(c.enclosure.hi > frac(Int("16180339887498948"), Int("10000000000000000")));
    CHECK(c.enclosure.width() <= Rat(1, Int("1000000000000")));
}

TEST_CASE("G_d domain errors") {
    for (const Rat& w : {Rat(0), Rat(1), Rat(3, 2), Rat(-1, 4)}) {
        try {
            (void)solve_Gd(3, w);
            FAIL("expected DomainError");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DomainError);
        }
    }
    CHECK_THROWS_AS((void)solve_Gd(1, Rat(1, 2)), Error);
}

TEST_CASE("G_d residual, sign change and monotonicity on a grid") {
    for (unsigned d = 2; d <= 5; ++d) {
        Rat prev = 0;
        for (int k = 1; k < 50; ++k) {
            Rat w = frac(k, 50);
            GdResult g = solve_Gd(d, w);
            CHECK(g.residual < Rat(1, Int("10000000000")));
            CHECK(residual(d, w, g.midpoint) == g.residual);
            CHECK(g.midpoint > prev);
            prev = g.midpoint;
            if (!g.exact) {
                Rat c = w / (1 - w);
                auto f = [&](const Rat& t) -> Rat {
                    Rat lhs = 1, s = 0, p = 1;
                    for (unsigned i = 0; i + 1 < d; ++i) lhs *= t;
                    for (unsigned i = 0; i + 1 < d; ++i) {
                        s += p;
                        p *= t;
                    }
                    return lhs - c * s;
                };
                CHECK(f(g.enclosure.lo) * f(g.enclosure.hi) <= 0);
            }
        }
    }
}

TEST_CASE("G_2 is w/(1-w)") {
    for (int k = 1; k < 100; ++k) {
        Rat w = frac(k, 100);
        GdResult g = solve_Gd(2, w);
        CHECK(abs(g.midpoint - w / (1 - w)) < Rat(1, Int("1000000000000")));
    }
}

TEST_CASE("logarithm enclosure") {
    Interval l = log_enclosure(Interval::point(Rat(1)));
    CHECK(l.contains(0));
    Interval l2 = log_enclosure(Interval::point(Rat(2)));
    // log 2 = 0.693147180559945309417...
    CHECK(l2.lo < frac(Int("693147180559945310"), Int("1000000000000000000")));
    CHECK(l2.hi > Rat(693147180559945309, Int("1000000000000000000")));
    CHECK_THROWS_AS((void)log_enclosure(Interval(Rat(-1), Rat(1))), Error);
}

TEST_CASE("golden ratio exponents tend to one") {
    CertifiedReal phi = CertifiedReal::surd(Rat(1), Rat(1), Int(5), Rat(2));
    SimulSequence seq = enumerate_best_simul(make_target({phi}), 100000);
    ExponentOptions opt;
    opt.window = 8;
    ExponentReport r = estimate_exponents(seq, 1, opt);
    CHECK_FALSE(r.low_confidence);
    CHECK(r.tau_est.hi < Rat(11, 10));
    CHECK(r.tau_est.lo >= 1);
    CHECK(abs(r.omega_hat_est.mid() - 1) < Rat(1, 10));
    CHECK(abs(r.omega_ordinary_est.mid() - 1) < frac(2, 10));
}

TEST_CASE("engineered growth q_next about q squared") {
    // a_{k+1} = q_k gives q_{k+1} = q_k^2 + q_{k-1}
    std::vector<Int> partials{Int(2)};
    Int q0 = 1, q1 = 2;
    for (int i = 0; i < 7; ++i) {
        partials.push_back(q1);
        Int q2 = q1 * q1 + q0;
        q0 = q1;
        q1 = q2;
    }
    CFExpansion e = cf_from_partials(Int(0), partials);
    SimulSequence seq = from_cf(e);
    REQUIRE(seq.size() >= 5);
    ExponentOptions opt;
    opt.window = 3;
    ExponentReport r = estimate_exponents(seq, 1, opt);
    CHECK(r.tau_est.lo > Rat(19, 10));
    CHECK(r.tau_est.hi < Rat(21, 10));
    CHECK(abs(r.omega_ordinary_est.mid() - r.tau_est.mid()) < frac(5, 100));
    CHECK(abs(r.omega_hat_est.mid() - 1) < frac(5, 100));
}

TEST_CASE("two records give a low-confidence report") {
    CertifiedReal phi = CertifiedReal::surd(Rat(1), Rat(1), Int(5), Rat(2));
    SimulSequence seq = enumerate_best_simul(make_target({phi}), 100);
    seq.resize(2);
    ExponentReport r = estimate_exponents(seq, 1);
    CHECK(r.low_confidence);
    seq.resize(1);
    CHECK_THROWS_AS((void)estimate_exponents(seq, 1), Error);
}

TEST_CASE("Proposition 2 determinants on a quadratic pair") {
    SimulSequence seq = enumerate_best_simul(parse_target("surd:(-1+1*sqrt(2))/1,surd:(-1+1*sqrt(3))/1"), 10000);
    Prop2Report r = check_prop2(seq);
    CHECK(!r.triples.empty());
    CHECK(r.bound.pass);
    for (const Prop2Triple& t : r.triples) {
        CHECK(t.D != 0);
        CHECK(t.j1 < t.j2);
        CHECK(det3(seq[t.nu - 1].vec(), seq[t.nu].vec(), seq[t.nu + 1].vec()) != 0);
    }
    for (size_t nu : r.dependent) CHECK(det3(seq[nu - 1].vec(), seq[nu].vec(), seq[nu + 1].vec()) == 0);
}

TEST_CASE("Proposition 2 needs d >= 2") {
    CertifiedReal phi = CertifiedReal::surd(Rat(1), Rat(1), Int(5), Rat(2));
    SimulSequence seq = enumerate_best_simul(make_target({phi}), 100);
    try {
        (void)check_prop2(seq);
        FAIL("expected NoIndependentTriple");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoIndependentTriple);
    }
}

TEST_CASE("Proposition 3 chain on plugged-in values") {
    Prop3Report bad_approx = check_prop3(Rat(1, 2), Rat(1, 2), Rat(1), 2);
    CHECK(bad_approx.all_hold);
    Prop3Report synth = check_prop3(Rat(1), Rat(1, 2), Rat(2), 2);
    CHECK(synth.all_hold);
    REQUIRE(synth.links.size() == 4);
    CHECK(synth.links[0].lhs == 1);
    CHECK(synth.links[1].lhs == 2);
    CHECK(synth.links[1].rhs == 2);
    CHECK(synth.links[2].rhs == 2);
    CHECK(synth.links[3].rhs == Rat(2, 3));
    Prop3Report broken = check_prop3(Rat(1), Rat(1, 2), Rat(3), 2);
    CHECK_FALSE(broken.all_hold);
    CHECK_FALSE(broken.links[1].holds);
    CHECK(broken.links[0].holds);
}

TEST_CASE("Proposition 3 on enclosures refuses only certified violations") {
    Interval tau(Rat(199, 100), Rat(201, 100));
    Prop3Report r = check_prop3(Interval(Rat(99, 100), Rat(101, 100)), Interval(Rat(1, 2), Rat(1, 2)), tau, 2);
    CHECK(r.all_hold);
    Prop3Report s = check_prop3(Interval(Rat(9, 10), Rat(9, 10)), Interval(Rat(1, 2), Rat(1, 2)), tau, 2);
    CHECK_FALSE(s.links[1].holds);
}
