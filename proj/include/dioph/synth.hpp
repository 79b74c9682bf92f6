#pragma once

#include "dioph/checks.hpp"
#include "dioph/simul.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dioph {

// delta(v) = 1/(2 p^2) for a primitive v = (p, b1, b2) with p >= 1.
Rat lemma3_delta(const IntVec& v);

struct Lemma4Constraints {
    std::vector<Int> extra_thresholds;  // p_k must also reach each of these
    std::size_t min_k = 2;
    // When false, a failure of the delta(v0)/2 clause of (x1) is recorded in the
    // trace instead of raising PreconditionViolated.
    bool require_x1_delta = true;
};

struct Lemma4Trace {
    IntVec v0, v1;
    Int delta_sq;
    Rat x1_diff;               // |V_0 - V_1|_inf
    CheckReport x1;            // both clauses of (x1)
    CheckReport u;             // p_k >= kappa
    Interval kappa;            // enclosure of the three-term maximum
    std::size_t k = 0;
    std::vector<Rat> y_norms;  // |y_i|_inf at V_k, i = 0..k
    std::vector<Rat> sigma;    // sigma_i, i = 1..k
    Rat laci_min;              // smallest certified lower bound of the x3-ball ratios
    CheckReport additivity, x6, x61, l2, laci;
};

struct Lemma4Result {
    std::vector<IntVec> v;  // v_0 .. v_k
    Lemma4Trace trace;
};

Lemma4Result lemma4_extend(const IntVec& v0, const IntVec& v1, const Lemma4Constraints& c = {});

struct Lemma5Trace {
    IntVec w0p, w0pp, w0;
    IntVec n_scaled;  // w0p x w0pp, first nonzero entry positive unless flipped
    bool flipped = false;
    Int delta_sq;
    Int gamma1, gamma2;
    std::vector<Rat> x0;  // w0 + n_scaled / (gamma1 p0)
    std::vector<Rat> X0;  // x0 * gamma1 p0 / Delta^2, on the plane n_scaled . x = 1
    IntVec g;             // integer point with n_scaled . g = 1
    Rat lambda, mu;       // X0 - g = lambda w0p + mu w0pp
    IntVec w1;
    Int delta1_sq;
    Int det_prime, det_second;
    CheckReport gammaI, del, in_plane, bases, complete, w1_bounds, w2_bounds;
    CheckReport remark4, remark5, remark5_scaled, remark6, remark7, oooo, parallelogram;
};

struct Lemma5Result {
    IntVec w1;
    Lemma5Trace trace;
};

Lemma5Result lemma5_lift(const IntVec& w0p, const IntVec& w0pp, const Int& gamma1, const Int& gamma2,
                         bool flip_normal = false);

enum class SynthMode { Paper, Diagnostic };

struct ConstructionOptions {
    SynthMode mode = SynthMode::Paper;
    Int gamma = 50;  // used in diagnostic mode
    std::size_t t_max = 1;
    bool growth_schedule = true;
    // When nonzero, stretches also run until q_{i_t+k_t} >= (gamma Delta_t^2)^(stretch_power * 2^(t-1)).
    unsigned stretch_power = 0;
    IntVec seed0{5, 2, 0}, seed1{22, 9, 0};
    std::vector<bool> branch_bits;  // per step: flip the normal used by the lift
    std::size_t bit_budget = 1000000;
};

struct Box {
    std::size_t anchor = 0;  // 1-based index i_t
    Rat cx, cy;
    Int q;
    Int delta_sq;
    Interval radius;  // enclosure of Delta / (24 gamma^2 q^2)
};

struct StepRecord {
    std::size_t t = 0;
    std::size_t i_t = 0, k_t = 0;
    Int delta_sq;
    Int a;
    Lemma4Trace lemma4;
    Lemma5Trace lemma5;
    CheckReport qqu, qqu1, growth;
    Rat max_q_ratio;  // q_{nu+1}/q_nu maximised over the step
};

struct ConstructionState {
    SynthMode mode = SynthMode::Paper;
    Int gamma;
    bool growth_schedule = true;
    std::vector<IntVec> z;            // z_1, z_2, ... stored from index 0
    std::vector<std::size_t> anchors;  // i_1, i_2, ...
    std::vector<Int> delta_sq;         // Delta_t^2 per anchor
    std::vector<Box> boxes;            // B_t per anchor
    std::vector<StepRecord> steps;
    std::vector<bool> branch_bits;
};

ConstructionState run_construction(const ConstructionOptions& opt);

// Box radius Delta / (24 gamma^2 q^2) enclosed to about 2^-bits relative width.
Box make_box(const std::vector<IntVec>& z, std::size_t anchor, const Int& gamma);

struct ConditionDReport {
    CheckReport box;              // box-wide lower bound of xi_nu / xi_{nu-1}
    std::vector<Interval> ratio_lower;  // per nu (1-based nu = index + 2)
    std::vector<Rat> mid_ratio;         // ratio at the box centre, where defined
    Interval constant;                  // 1/(16 sqrt6 (50 gamma^2 + 2))
    Rat min_mid_ratio;
};

struct SampleResult {
    std::string label;
    Rat x1, x2;
    Int scanned_to;
    bool B_ok = true, C_ok = true;
    std::string detail;
    std::vector<Int> found_q;
    std::vector<std::string> stretch_pattern;  // per step: "x5", "x51" or "beyond scan"
    std::vector<std::string> lift_middle;      // per step: whether w1 - w0 appears
};

struct VerifyReport {
    CheckReport A;       // Lemma 4 hypotheses at every anchor, plus the step bound (aq) from t = 2
    CheckReport aq_first;  // the step bound at t = 1, reported only
    CheckReport nested;        // B_{t+1} inside B_t for t >= 2
    CheckReport nested_first;  // B_2 inside B_1, reported only
    ConditionDReport D;
    CheckReport cert_remark5_link, cert_x3_containment, cert_lemma5_ball, cert_lift;
    bool certificate_path = false;
    bool oracle_run = false;
    bool certificate_only = false;
    Int oracle_limit;
    std::vector<SampleResult> samples;
    bool B_oracle = true, C_oracle = true;
};

struct VerifyOptions {
    std::uint64_t oracle_budget = 100000;
    unsigned workers = 1;
    bool run_oracle = true;
};

VerifyReport verify_conditions(const ConstructionState& state, const VerifyOptions& opt = {});

// Rebuilds boxes and Delta_t from z and the anchors, validating the layout.
ConstructionState rebuild_state(SynthMode mode, const Int& gamma, std::vector<IntVec> z,
                                std::vector<std::size_t> anchors);

struct EmittedAlpha {
    std::vector<Rat> mid;
    Rat radius;
    std::string target;  // "dec:<mid>~<radius>,dec:<mid>~<radius>"
};

EmittedAlpha emit_alpha(const ConstructionState& state, int digits);

// Target vector whose components are the exact centre of the final box.
TargetVector box_centre_target(const ConstructionState& state);

// Records z_1..z_N with xi evaluated at the given point.
SimulSequence constructed_sequence(const ConstructionState& state, const Rat& x1, const Rat& x2);

std::string to_string(SynthMode m);

}  // namespace dioph
