#pragma once

#include "dioph/checks.hpp"
#include "dioph/target.hpp"

#include <cstdint>
#include <vector>

namespace dioph {

struct ApproxVector {
    Int q;
    std::vector<Int> a;
    CertifiedReal xi;

    IntVec vec() const;
};

using SimulSequence = std::vector<ApproxVector>;

struct SimulOptions {
    // Rational targets may tie; ties then simply do not start a new record.
    bool allow_ties = false;
};

SimulSequence enumerate_best_simul(const TargetVector& alpha, std::uint64_t q_max, const SimulOptions& opt = {});

// At an exact half-integer either neighbour may be returned.
Int nearest_integer(const CertifiedReal& x, const std::string& what);

// xi(q) = max_j ||q alpha_j|| computed exactly, together with the nearest integers.
ApproxVector remainder_at(const TargetVector& alpha, const Int& q);

CheckReport check_minkowski_simul(const SimulSequence& seq, std::size_t d);

struct VolumeBoundsReport {
    CheckReport upper;  // xi_nu q_{nu+1} <= Delta_2
    CheckReport lower;  // K Delta_2 <= xi_nu q_{nu+1}
    CheckReport dee;    // (K Delta_2)^{d/(d-1)} <= q_{nu+1}
    std::vector<Int> delta2_sq;
};

VolumeBoundsReport check_two_dim_volume_bounds(const SimulSequence& seq, const TargetVector& alpha);

// K^2 = 1 / (4 d (1 + sum alpha_j^2)) enclosed.
Interval k_constant_sq(const TargetVector& alpha);

struct IndependenceChain {
    std::vector<std::size_t> indices;           // 0-based positions nu_1 < ... < nu_{d+1}
    std::vector<std::vector<IntVec>> subspaces;  // spanning vectors of pi_j
    std::vector<Int> volumes_sq;                 // Delta_j^2, j = 1..d+1
};

IndependenceChain build_independence_chain(const SimulSequence& seq, std::size_t start);

CheckReport check_lemma1(const IndependenceChain& chain, const SimulSequence& seq);

struct Margin {
    Interval value;
    std::size_t index = 0;
};

// min over records with q >= q_min of q xi^d.
Margin badness_margin(const SimulSequence& seq, std::size_t d, const Int& q_min = 1);

// Quantitative (ii) => (i): q xi^d >= K / ((2 sqrt d)^{d-1} M^d) wherever a full chain exists.
CheckReport check_growth_to_margin(const SimulSequence& seq, const TargetVector& alpha);

Rat sup_q_ratio(const SimulSequence& seq);
Interval inf_xi_ratio(const SimulSequence& seq);

}  // namespace dioph
