#pragma once

#include "dioph/checks.hpp"
#include "dioph/simul.hpp"
#include "dioph/target.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace dioph {

struct LinFormVector {
    IntVec m;              // (m_0, m_1, ..., m_d)
    Int M;                 // max_{j>=1} |m_j|
    CertifiedReal value;   // m_0 + m_1 alpha_1 + ... + m_d alpha_d
    CertifiedReal L;       // |value|
};

using LinFormSequence = std::vector<LinFormVector>;

struct LinFormOptions {
    unsigned workers = 1;
    bool allow_ties = false;
};

// Heights are scanned shell by shell; (m_1..m_d) is normalised so that its first
// nonzero entry is positive.
LinFormSequence enumerate_best_linform(const TargetVector& alpha, std::uint64_t M_max, const LinFormOptions& opt = {});

CheckReport check_minkowski_linform(const LinFormSequence& seq, std::size_t d);

// Rank of the span of the last k records.
std::size_t tail_span_rank(const LinFormSequence& seq, std::size_t k);

struct ReversedRecord {
    std::vector<CertifiedReal> z;  // G m with the sign making z_0 positive
    Rat zbar_norm;                  // |(z_1..z_d)|_inf = T M
    IntVec m;                       // preimage in Z^{d+1}
    std::size_t source_index = 0;   // position of m in the forward sequence
};

struct ReversalResult {
    Rat T;
    std::vector<ReversedRecord> records;
    CheckReport relations;  // z_0 = T^{-d} L and |zbar|_inf = T M
};

// Largest power of 1/2 with T <= 1/M_mu and T^{1-d} L_k M_k > 1 on the prefix.
Rat default_reversal_scale(const LinFormSequence& prefix, std::size_t d);

ReversalResult reversal_transform(const LinFormSequence& prefix, std::size_t d, std::optional<Rat> T = std::nullopt);

struct Lemma2Report {
    CheckReport conclusion;
    std::vector<Interval> delta2_sq;
};

// Hypotheses are enforced with PreconditionViolated; the conclusion is checked as
// Delta_2^2 <= 8 d^2 (|zbar_nu| z_{0,nu+1})^2.
Lemma2Report check_lemma2(const std::vector<ReversedRecord>& records, std::size_t d);

struct CriteriaOptions {
    Rat ratio_bound = 1000;
    unsigned workers = 1;
};

struct CriteriaReport {
    std::size_t d = 0;
    std::uint64_t q_max = 0, M_max = 0;
    std::size_t simul_records = 0, linform_records = 0;
    Rat sup_q_ratio;
    Interval inf_L_ratio;
    Interval inf_xi_ratio;
    Rat sup_M_ratio;
    Margin simul_margin;    // min q xi^d
    Margin linform_margin;  // min M^d L
    Rat ratio_bound;
    bool consistent = false;
    std::string verdict;
};

CriteriaReport theorem1_criteria(const TargetVector& alpha, std::uint64_t q_max, std::uint64_t M_max,
                                 const CriteriaOptions& opt = {});

}  // namespace dioph
