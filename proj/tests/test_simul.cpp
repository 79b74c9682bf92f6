#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dioph/simul.hpp"
#include "oracles.hpp"

using namespace dioph;

namespace {

const char* kRoot23 = "surd:(-1+1*sqrt(2))/1,surd:(-1+1*sqrt(3))/1";

void require_matches_oracle(const oracle::Fixture& fx, std::uint64_t q_max) {
    SimulSequence lib = enumerate_best_simul(parse_target(fx.target()), q_max);
    auto ref = oracle::best_simul({fx.x, fx.y}, q_max);
    REQUIRE(lib.size() == ref.size());
    for (size_t i = 0; i < lib.size(); ++i) {
        CHECK(lib[i].q == Int(static_cast<unsigned long>(ref[i].q)));
        CHECK(lib[i].a[0] == ref[i].a[0]);
        CHECK(lib[i].a[1] == ref[i].a[1]);
    }
}

}  // namespace

TEST_CASE("golden ratio gives the Fibonacci denominators") {
    SimulSequence seq = enumerate_best_simul(parse_target("surd:(1+1*sqrt(5))/2"), 100);
    std::vector<long> want{1, 2, 3, 5, 8, 13, 21, 34, 55, 89};
    REQUIRE(seq.size() == want.size());
    for (size_t i = 0; i < want.size(); ++i) CHECK(seq[i].q == want[i]);
}

TEST_CASE("sqrt2-1, sqrt3-1 matches the exhaustive scan") {
    require_matches_oracle(oracle::surd_fixtures()[0], 10000);
}

TEST_CASE("every fixture matches the exhaustive scan at q <= 2000") {
    for (const auto& fx : oracle::surd_fixtures()) {
        CAPTURE(fx.name);
        require_matches_oracle(fx, 2000);
    }
}

TEST_CASE("small q_max returns only the first record") {
    SimulSequence seq = enumerate_best_simul(parse_target(kRoot23), 1);
    REQUIRE(seq.size() == 1);
    CHECK(seq[0].q == 1);
    CHECK(seq[0].a[0] == 0);
    CHECK(seq[0].a[1] == 1);
}

TEST_CASE("rational targets report a tie") {
    try {
        (void)enumerate_best_simul(parse_target("rat:1/3,rat:2/5"), 100);
        FAIL("expected TieDetected");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TieDetected);
    }
}

TEST_CASE("records are monotone and satisfy the Minkowski bound") {
    for (const auto& fx : oracle::surd_fixtures()) {
        CAPTURE(fx.name);
        SimulSequence seq = enumerate_best_simul(parse_target(fx.target()), 5000);
        for (size_t i = 1; i < seq.size(); ++i) {
            CHECK(seq[i].q > seq[i - 1].q);
            CHECK(certified_lt(seq[i].xi, seq[i - 1].xi, "xi decreasing"));
        }
        CHECK(check_minkowski_simul(seq, 2).pass);
    }
}

TEST_CASE("Minkowski check flags an inflated remainder") {
    SimulSequence seq = enumerate_best_simul(parse_target(kRoot23), 1000);
    REQUIRE(seq.size() > 4);
    seq[3].xi = CertifiedReal(Rat(1, 2));
    CheckReport r = check_minkowski_simul(seq, 2);
    CHECK_FALSE(r.pass);
    CHECK(r.first_violation == 3);
}

TEST_CASE("two-dimensional volume bounds on the first ten pairs") {
    TargetVector t = parse_target(kRoot23);
    SimulSequence seq = enumerate_best_simul(t, 200000);
    REQUIRE(seq.size() >= 11);
    seq.resize(11);
    VolumeBoundsReport r = check_two_dim_volume_bounds(seq, t);
    CHECK(r.upper.pass);
    CHECK(r.lower.pass);
    CHECK(r.dee.pass);
    CHECK(r.upper.checked == 10);
}

TEST_CASE("volume upper bound with constant one fails for sqrt11-3, sqrt13-3") {
    const auto fx = oracle::surd_fixtures()[7];
    REQUIRE(fx.name == "sqrt11-3,sqrt13-3");
    TargetVector t = parse_target(fx.target());
    SimulSequence seq = enumerate_best_simul(t, 1000);
    VolumeBoundsReport r = check_two_dim_volume_bounds(seq, t);
    CHECK_FALSE(r.upper.pass);
    CHECK(r.upper.first_violation == 6);
    CHECK(seq[6].q == 180);
    CHECK(seq[7].q == 938);
    CHECK(r.upper.worst_ratio > frac(102, 100));
    CHECK(r.upper.worst_ratio < Rat(103, 100));
    CHECK(r.lower.pass);
    CHECK(r.dee.pass);
}

TEST_CASE("lower volume bound and growth hold on every fixture") {
    for (const auto& fx : oracle::surd_fixtures()) {
        CAPTURE(fx.name);
        TargetVector t = parse_target(fx.target());
        SimulSequence seq = enumerate_best_simul(t, 5000);
        VolumeBoundsReport r = check_two_dim_volume_bounds(seq, t);
        CHECK(r.lower.pass);
        CHECK(r.dee.pass);
        for (size_t i = 0; i + 1 < seq.size(); ++i)
            CHECK(r.delta2_sq[i] == completed_volume_sq({seq[i].vec(), seq[i + 1].vec()}));
    }
}

TEST_CASE("independence chain and Lemma 1") {
    SimulSequence seq = enumerate_best_simul(parse_target(kRoot23), 10000);
    IndependenceChain c = build_independence_chain(seq, 0);
    REQUIRE(c.indices.size() == 3);
    CHECK(c.indices[0] == 0);
    CHECK(c.indices[1] == 1);
    CHECK(rank({seq[c.indices[0]].vec(), seq[c.indices[1]].vec(), seq[c.indices[2]].vec()}) == 3);
    CHECK(c.volumes_sq[2] == 1);
    CHECK(c.volumes_sq[0] == dot(seq[0].vec(), seq[0].vec()));
    CHECK(check_lemma1(c, seq).pass);
    for (size_t s = 0; s + 2 < seq.size(); ++s) {
        IndependenceChain ch;
        try {
            ch = build_independence_chain(seq, s);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NotSpanning);
            break;
        }
        CHECK(check_lemma1(ch, seq).pass);
    }
}

TEST_CASE("one-dimensional chain is a consecutive pair") {
    TargetVector t = parse_target("surd:(1+1*sqrt(5))/2");
    SimulSequence seq = enumerate_best_simul(t, 1000);
    IndependenceChain c = build_independence_chain(seq, 3);
    REQUIRE(c.indices.size() == 2);
    CHECK(c.indices[1] == 4);
    CHECK(check_lemma1(c, seq).pass);
    VolumeBoundsReport r = check_two_dim_volume_bounds(seq, t);
    CHECK(r.upper.pass);
    CHECK(r.lower.pass);
    for (const Int& d : r.delta2_sq) CHECK(d == 1);
}

TEST_CASE("badness margin of the golden ratio") {
    SimulSequence seq = enumerate_best_simul(parse_target("surd:(1+1*sqrt(5))/2"), 10000);
    auto ref = oracle::min_q_dist({1, 1, 5, 2}, 13, 10000);
    Margin tail = badness_margin(seq, 1, 13);
    CHECK(tail.value.hi >= ref.first);
    CHECK(tail.value.lo <= ref.second);
    CHECK(tail.value.lo > Rat(447, 1000));
    CHECK(tail.value.hi < frac(448, 1000));
    Margin all = badness_margin(seq, 1);
    CHECK(seq[all.index].q == 1);
}

TEST_CASE("ratio statistics and the quantitative growth bound") {
    TargetVector t = parse_target(kRoot23);
    SimulSequence seq = enumerate_best_simul(t, 10000);
    Rat sup = sup_q_ratio(seq);
    for (size_t i = 1; i < seq.size(); ++i) CHECK(Rat(seq[i].q, seq[i - 1].q) <= sup);
    CHECK(inf_xi_ratio(seq).lo > 0);
    CHECK(check_growth_to_margin(seq, t).pass);
    Interval k = k_constant_sq(t);
    CHECK(k.hi <= Rat(1, 4));
    CHECK(k.lo > 0);
}
