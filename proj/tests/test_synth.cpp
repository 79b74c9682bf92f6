#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dioph/exponents.hpp"
#include "dioph/linform.hpp"
#include "dioph/synth.hpp"

using namespace dioph;

namespace {

IntVec v3(long a, long b, long c) { return {Int(a), Int(b), Int(c)}; }

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::ParseError;
}

ConstructionState diagnostic_run(std::size_t t_max) {
    ConstructionOptions opt;
    opt.mode = SynthMode::Diagnostic;
    opt.gamma = 50;
    opt.t_max = t_max;
    return run_construction(opt);
}

}  // namespace

TEST_CASE("Lemma 3 radius") {
    CHECK(lemma3_delta(v3(1, 0, 0)) == Rat(1, 2));
    CHECK(lemma3_delta(v3(5, 2, 0)) == Rat(1, 50));
    CHECK(kind_of([] { (void)lemma3_delta(v3(2, 4, 6)); }) == ErrorKind::NotPrimitive);
}

TEST_CASE("Lemma 4 stretch from the seed plane") {
    Lemma4Result r = lemma4_extend(v3(5, 2, 0), v3(22, 9, 0));
    CHECK(r.trace.x1_diff == Rat(1, 110));
    CHECK(r.trace.x1.pass);
    std::vector<long> want{5, 22, 27, 49, 76, 125, 201, 326};
    REQUIRE(r.v.size() >= 3);
    for (size_t i = 0; i < std::min(want.size(), r.v.size()); ++i) CHECK(r.v[i][0] == want[i]);
    for (size_t i = 2; i < r.v.size(); ++i) CHECK(r.v[i] == add(r.v[i - 1], r.v[i - 2]));
    CHECK(r.trace.k + 1 == r.v.size());
    CHECK(r.trace.u.pass);
    CHECK(r.trace.additivity.pass);
    CHECK(r.trace.x6.pass);
    CHECK(r.trace.x61.pass);
    for (size_t i = 1; i + 1 < r.trace.y_norms.size(); ++i)
        CHECK(r.trace.y_norms[i - 1] == r.trace.y_norms[i] + r.trace.y_norms[i + 1]);
}

TEST_CASE("Lemma 4 thresholds move the stretch end") {
    Lemma4Constraints c;
    c.extra_thresholds = {Int(100000)};
    Lemma4Result r = lemma4_extend(v3(5, 2, 0), v3(22, 9, 0), c);
    CHECK(r.v.back()[0] >= 100000);
    CHECK(r.v[r.v.size() - 2][0] < 100000);
}

TEST_CASE("Lemma 4 rejects bases failing its hypotheses") {
    CHECK(kind_of([] { (void)lemma4_extend(v3(1, 1, 0), v3(2, 1, 1)); }) == ErrorKind::PreconditionViolated);
    // consecutive Fibonacci vectors: 1/(F_n F_{n+1}) > 1/(4 F_n^2)
    CHECK(kind_of([] { (void)lemma4_extend(v3(8, 5, 0), v3(13, 8, 0)); }) == ErrorKind::PreconditionViolated);
    CHECK(kind_of([] { (void)lemma4_extend(v3(22, 9, 0), v3(5, 2, 0)); }) == ErrorKind::PreconditionViolated);
}

TEST_CASE("Lemma 5 lift lands in the printed window") {
    Lemma5Result r = lemma5_lift(v3(89, 55, 0), v3(144, 89, 0), Int(50), Int(2500));
    const Lemma5Trace& t = r.trace;
    CHECK(t.w0 == v3(233, 144, 0));
    CHECK(t.delta_sq == 1);
    // (50 - 2/50) p0^2 <= p1 <= (50 + 2/50) p0^2 with p0 = 233
    Rat p1(r.w1[0]);
    CHECK(p1 >= (Rat(50) - Rat(1, 25)) * 233 * 233);
    CHECK(p1 <= (Rat(50) + Rat(1, 25)) * 233 * 233);
    CHECK(t.w1_bounds.pass);
    CHECK(t.w2_bounds.pass);
    CHECK(t.in_plane.pass);
    CHECK(t.bases.pass);
    CHECK(t.complete.pass);
    CHECK(dot(t.n_scaled, r.w1) == 1);
    CHECK(abs(det3(t.w0p, t.w0, r.w1)) == 1);
    CHECK(abs(det3(t.w0pp, t.w0, r.w1)) == 1);
}

TEST_CASE("Lemma 5 hypotheses") {
    CHECK(kind_of([] { (void)lemma5_lift(v3(5, 2, 0), v3(22, 9, 0), Int(50), Int(2500)); }) ==
          ErrorKind::PreconditionViolated);
    CHECK(kind_of([] { (void)lemma5_lift(v3(89, 55, 0), v3(144, 89, 0), Int(40), Int(1600)); }) ==
          ErrorKind::PreconditionViolated);
    CHECK(kind_of([] { (void)lemma5_lift(v3(89, 55, 0), v3(144, 89, 0), Int(50), Int(2000)); }) ==
          ErrorKind::PreconditionViolated);
}

TEST_CASE("flipping the normal lifts to the other side") {
    Lemma5Result a = lemma5_lift(v3(89, 55, 0), v3(144, 89, 0), Int(50), Int(2500));
    Lemma5Result b = lemma5_lift(v3(89, 55, 0), v3(144, 89, 0), Int(50), Int(2500), true);
    CHECK(b.trace.flipped);
    CHECK(a.w1[2] * b.w1[2] < 0);
    CHECK(b.trace.w1_bounds.pass);
}

TEST_CASE("initial state only") {
    ConstructionOptions opt;
    opt.t_max = 0;
    ConstructionState st = run_construction(opt);
    CHECK(st.gamma == 400);
    REQUIRE(st.z.size() == 2);
    CHECK(st.z[0] == v3(5, 2, 0));
    CHECK(st.z[1] == v3(22, 9, 0));
    REQUIRE(st.boxes.size() == 1);
    const Box& b = st.boxes[0];
    CHECK(b.cx == Rat(2, 5));
    CHECK(b.cy == 0);
    // Delta_1 = 1, radius 1/(24 * 400^2 * 25)
    CHECK(b.radius.contains(Rat(1, 24 * 160000 * 25)));
    EmittedAlpha a = emit_alpha(st, 2);
    CHECK(a.mid[0] == Rat(2, 5));
    CHECK(kind_of([&] { (void)emit_alpha(st, 12); }) == ErrorKind::InsufficientDepth);
}

TEST_CASE("paper mode first stretch") {
    ConstructionOptions opt;
    opt.t_max = 1;
    ConstructionState st = run_construction(opt);
    REQUIRE(st.steps.size() == 1);
    const StepRecord& s = st.steps[0];
    const Int& end = st.z[s.i_t + s.k_t - 1][0];
    CHECK(end >= 400 * s.delta_sq);
    CHECK(end >= 400 * 5);
    CHECK(s.qqu.pass);
    CHECK(s.qqu1.pass);
    CHECK(s.a == 50 * 400 * 400 + 1);
}

TEST_CASE("diagnostic run: lifts, growth and the ratio bound") {
    ConstructionState st = diagnostic_run(2);
    REQUIRE(st.steps.size() == 2);
    Rat prev = 0;
    for (const StepRecord& s : st.steps) {
        const Int& p0 = s.lemma5.w0[0];
        const Int& p1 = s.lemma5.w1[0];
        Rat lower = (Rat(50) - Rat(1, 25)) * Rat(p0 * p0, s.lemma5.delta_sq);
        lower.canonicalize();
        CHECK(Rat(p1) >= lower);
        CHECK(2 * p1 >= 50 * p0);
        CHECK(s.lemma5.w1_bounds.pass);
        CHECK(s.lemma5.w2_bounds.pass);
        CHECK(s.lemma5.remark5_scaled.pass);
        CHECK(s.max_q_ratio > prev);
        prev = s.max_q_ratio;
    }
    for (size_t t = 1; t < st.boxes.size(); ++t) CHECK(st.boxes[t].anchor > st.boxes[t - 1].anchor);
    for (size_t i = 2; i < st.z.size(); ++i) CHECK(st.z[i][0] > st.z[i - 1][0]);
}

TEST_CASE("diagnostic run: conditions and oracle") {
    ConstructionState st = diagnostic_run(2);
    VerifyOptions vo;
    vo.oracle_budget = 30000;
    VerifyReport v = verify_conditions(st, vo);
    CHECK(v.D.box.pass);
    CHECK(v.D.min_mid_ratio > v.D.constant.hi);
    CHECK(v.nested.pass);
    CHECK(v.oracle_run);
    CHECK(v.B_oracle);
    CHECK(v.C_oracle);
    CHECK(v.samples.size() == 5);
    // (x1) at the anchor after the second lift is the known gap
    CHECK_FALSE(v.A.pass);
    CHECK(v.A.detail.find("(x1)") != std::string::npos);
}

TEST_CASE("corrupted ledger fails a certificate") {
    ConstructionState st = diagnostic_run(1);
    std::vector<IntVec> z = st.z;
    // first vector of the second anchor pair
    z[st.anchors[1] - 1][1] += 1;
    bool caught = false;
    try {
        ConstructionState bad = rebuild_state(st.mode, st.gamma, z, st.anchors);
        VerifyOptions vo;
        vo.run_oracle = false;
        VerifyReport v = verify_conditions(bad, vo);
        caught = !v.A.pass || !v.D.box.pass || !v.nested.pass;
    } catch (const Error&) {
        caught = true;
    }
    CHECK(caught);
}

TEST_CASE("ledger rebuild reproduces boxes") {
    ConstructionState st = diagnostic_run(1);
    ConstructionState again = rebuild_state(st.mode, st.gamma, st.z, st.anchors);
    REQUIRE(again.boxes.size() == st.boxes.size());
    for (size_t i = 0; i < st.boxes.size(); ++i) {
        CHECK(again.boxes[i].cx == st.boxes[i].cx);
        CHECK(again.boxes[i].cy == st.boxes[i].cy);
        CHECK(again.boxes[i].delta_sq == st.boxes[i].delta_sq);
    }
}

TEST_CASE("stretches are coplanar and Proposition 2 sees only boundary triples") {
    ConstructionState st = diagnostic_run(1);
    const Box& b = st.boxes.back();
    SimulSequence seq = constructed_sequence(st, b.cx, b.cy);
    seq.resize(b.anchor);
    Prop2Report r = check_prop2(seq);
    CHECK(r.bound.pass);
    const StepRecord& s = st.steps[0];
    for (size_t nu = 1; nu + 1 < seq.size(); ++nu) {
        bool in_stretch = nu + 1 >= s.i_t && nu + 1 < s.i_t + s.k_t;
        if (in_stretch) CHECK(det3(seq[nu - 1].vec(), seq[nu].vec(), seq[nu + 1].vec()) == 0);
    }
    for (const Prop2Triple& t : r.triples) CHECK(t.nu + 1 >= s.i_t + s.k_t - 1);
}

TEST_CASE("criteria flag the synthesized vector") {
    ConstructionState st = diagnostic_run(2);
    TargetVector t = box_centre_target(st);
    CriteriaReport r = theorem1_criteria(t, 6000000, 50);
    CHECK(r.sup_q_ratio > 1000);
    CHECK_FALSE(r.consistent);
}

TEST_CASE("emitted digits match the box") {
    ConstructionState st = diagnostic_run(2);
    EmittedAlpha a = emit_alpha(st, 30);
    const Box& b = st.boxes.back();
    CHECK(abs(a.mid[0] - b.cx) <= a.radius);
    CHECK(abs(a.mid[1] - b.cy) <= a.radius);
    CHECK(a.radius >= b.radius.hi);
    CHECK(a.target.rfind("dec:", 0) == 0);
}

TEST_CASE("bit budget stops runaway growth") {
    ConstructionOptions opt;
    opt.t_max = 3;
    opt.bit_budget = 100;
    CHECK(kind_of([&] { (void)run_construction(opt); }) == ErrorKind::StepTooLarge);
}
