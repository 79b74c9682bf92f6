#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dioph/exactcore.hpp"
#include "dioph/target.hpp"

#include <random>

using namespace dioph;

namespace {

IntVec v3(long a, long b, long c) { return {Int(a), Int(b), Int(c)}; }

Int gram(const IntVec& a, const IntVec& b) {
    Int ab = dot(a, b);
    return dot(a, a) * dot(b, b) - ab * ab;
}

}  // namespace

TEST_CASE("fundamental volume of small planes") {
    CHECK(fundamental_volume_sq(v3(1, 0, 0), v3(0, 1, 0)) == 1);
    CHECK(fundamental_volume_sq(v3(2, 0, 0), v3(0, 2, 0)) == 16);
    CHECK(fundamental_volume_sq(v3(1, 1, 0), v3(2, 1, 1)) == 3);
}

TEST_CASE("dependent vectors are rejected") {
    try {
        (void)fundamental_volume_sq(v3(1, 2, 3), v3(-2, -4, -6));
        FAIL("expected DependentInput");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DependentInput);
    }
    CHECK_THROWS_AS((void)is_complete(v3(0, 0, 0), v3(1, 0, 0)), Error);
}

TEST_CASE("completeness through the gcd of minors") {
    CHECK(is_complete(v3(1, 0, 0), v3(0, 1, 0)));
    CHECK_FALSE(is_complete(v3(2, 0, 0), v3(0, 2, 0)));
    CHECK(is_complete(v3(1, 1, 0), v3(2, 1, 1)));
    auto m = minors2(v3(1, 1, 0), v3(2, 1, 1));
    Int g = 0;
    for (const Int& x : m) g = gcd(g, x);
    CHECK(g == 1);
}

TEST_CASE("volume agrees with the Gram determinant and is unimodular invariant") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<long> coord(-40, 40), mult(-7, 7);
    int tested = 0;
    while (tested < 300) {
        IntVec a = v3(coord(rng), coord(rng), coord(rng)), b = v3(coord(rng), coord(rng), coord(rng));
        if (rank({a, b}) < 2) continue;
        ++tested;
        Int v = fundamental_volume_sq(a, b);
        CHECK(v == gram(a, b));
        CHECK(v == fundamental_volume_sq(b, a));
        CHECK(v == fundamental_volume_sq(a, add(b, scale(Int(mult(rng)), a))));
        Int c = content(cross(a, b));
        CHECK(completed_volume_sq({a, b}) * c * c == v);
        CHECK(is_complete(a, b) == (c == 1));
    }
}

TEST_CASE("determinant and rank") {
    CHECK(det3(v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)) == 1);
    CHECK(det3(v3(2, 1, 0), v3(1, 3, 1), v3(0, 1, 4)) == 18);
    CHECK(det({v3(2, 1, 0), v3(1, 3, 1), v3(0, 1, 4)}) == 18);
    CHECK(rank({v3(1, 2, 3), v3(2, 4, 6), v3(0, 1, 1)}) == 2);
    CHECK(completed_volume_sq({v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)}) == 1);
}

TEST_CASE("certified comparison examples") {
    const Rat w(1, 1000000);
    CHECK(certified_compare(CertifiedReal::sqrt_of(2), CertifiedReal(Rat(7, 5)), w) == Ordering::Greater);
    CHECK(certified_compare(CertifiedReal(Rat(3, 7)), CertifiedReal(Rat(3, 7)), w) == Ordering::Equal);
    CertifiedReal approx = CertifiedReal::enclosed(frac(141421355, 100000000), Rat(141421357, 100000000));
    CHECK(certified_compare(CertifiedReal::sqrt_of(2), approx, Rat(1, 10000)) == Ordering::TieUndecided);
    CHECK_THROWS_AS(compare_or_throw(CertifiedReal::sqrt_of(2), approx, "overlap"), Error);
}

TEST_CASE("exact surd arithmetic") {
    CertifiedReal s2 = CertifiedReal::sqrt_of(2), s8 = CertifiedReal::sqrt_of(8);
    CHECK((s8 - CertifiedReal(Int(2)) * s2).is_exact_zero());
    CHECK((s2 * s2).as_rational() == Rat(2));
    CertifiedReal phi = CertifiedReal::surd(Rat(1), Rat(1), Int(5), Rat(2));
    CHECK((phi * phi - phi - CertifiedReal(Int(1))).is_exact_zero());
    CHECK(phi.sign_or_throw("phi") == 1);
    CHECK((CertifiedReal(Int(1)) - phi).sign_or_throw("1 - phi") == -1);
}

TEST_CASE("comparison is antisymmetric and total on exact values") {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<long> small(-30, 30), rad(2, 40);
    const Rat w(1, Int(1) << 80);
    std::vector<CertifiedReal> xs;
    for (int i = 0; i < 40; ++i) {
        long b = small(rng);
        xs.push_back(CertifiedReal::surd(Rat(small(rng)), Rat(b), Int(rad(rng)), Rat(1 + (small(rng) & 7))));
    }
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = 0; j < xs.size(); ++j) {
            Ordering a = certified_compare(xs[i], xs[j], w), b = certified_compare(xs[j], xs[i], w);
            REQUIRE(a != Ordering::TieUndecided);
            if (a == Ordering::Less) CHECK(b == Ordering::Greater);
            if (a == Ordering::Greater) CHECK(b == Ordering::Less);
            if (a == Ordering::Equal) CHECK(b == Ordering::Equal);
        }
}

TEST_CASE("refinement meets the requested width and nests") {
    CertifiedReal x = CertifiedReal::surd(Rat(-3), Rat(2), Int(7), Rat(5));
    Interval prev = x.enclose(8);
    for (unsigned bits = 16; bits <= 512; bits *= 2) {
        Rat width(1, Int(1) << bits);
        Interval cur = x.refine_to(width);
        CHECK(cur.width() <= width);
        CHECK(cur.lo <= cur.hi);
        CHECK(cur.lo >= prev.lo);
        CHECK(cur.hi <= prev.hi);
        prev = cur;
    }
}

TEST_CASE("nearest integer rounds half up and floors exactly") {
    CHECK(round_nearest(Rat(5, 2)) == 3);
    CHECK(round_nearest(Rat(-5, 2)) == -2);
    CHECK(round_nearest(Rat(7, 3)) == 2);
    CHECK(floor_rat(Rat(-1, 3)) == -1);
    CHECK(ceil_rat(Rat(-1, 3)) == 0);
}

TEST_CASE("target parsing") {
    TargetVector t = parse_target("surd:(-1+1*sqrt(2))/1,rat:1/3");
    REQUIRE(t.dim() == 2);
    CHECK(t.alpha[1].as_rational() == Rat(1, 3));
    CHECK(t.alpha[0].enclose(64).lo > frac(41421356, 100000000));
    CHECK(t.alpha[0].enclose(64).hi < Rat(41421357, 100000000));
    CHECK_THROWS_AS(parse_target("bogus"), Error);
    CHECK_THROWS_AS(parse_target("surd:(1+1*sqrt(5))/0"), Error);
}
