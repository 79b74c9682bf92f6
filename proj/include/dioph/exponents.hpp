#pragma once

#include "dioph/checks.hpp"
#include "dioph/simul.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dioph {

struct GdResult {
    Interval enclosure;
    Rat midpoint;
    bool exact = false;  // enclosure is a single rational root
    Rat residual;        // |t^{d-1} - c (1 + ... + t^{d-2})| at the midpoint, c = w/(1-w)
};

// Positive root of t^{d-1} = (w/(1-w)) (1 + t + ... + t^{d-2}), enclosed to width <= 1e-12.
GdResult solve_Gd(unsigned d, const Rat& omega_hat);

// Rational enclosure of log(x) for x > 0, about 1e-30 wide.
Interval log_enclosure(const Interval& x);

struct ExponentOptions {
    // Tail window: the last `window` values of nu (0 means all), unless `range` is set.
    std::size_t window = 0;
    std::optional<std::pair<std::size_t, std::size_t>> range;  // [begin, end) over nu
};

struct ExponentReport {
    std::size_t d = 0;
    std::size_t count = 0;
    std::size_t window_begin = 0, window_end = 0;
    // e_nu = -log xi_nu / log q_{nu+1}; tau_nu = log q_{nu+1} / log q_nu.
    std::vector<Interval> e, tau;
    std::vector<std::size_t> tau_index;
    Interval omega_est, omega_hat_est, tau_est;           // over the window
    Interval omega_full, omega_hat_full, tau_full;        // over the whole range
    Interval omega_ordinary_est;                          // max of -log xi_nu / log q_nu over the window
    std::optional<GdResult> G_d_value;                    // at the midpoint of omega_hat_est
    bool low_confidence = false;
};

ExponentReport estimate_exponents(const SimulSequence& seq, std::size_t d, const ExponentOptions& opt = {});

struct Prop2Triple {
    std::size_t nu = 0;  // middle index
    std::size_t j1 = 0, j2 = 0;
    Int D;
};

struct Prop2Report {
    std::vector<Prop2Triple> triples;
    std::vector<std::size_t> dependent;  // middle indices of dependent consecutive triples
    CheckReport bound;                   // |D| <= 6 xi_{nu-1} xi_nu q_{nu+1}
};

Prop2Report check_prop2(const SimulSequence& seq);

struct Prop3Link {
    std::string name;
    bool holds = false;
    Rat lhs, rhs;
};

struct Prop3Report {
    std::vector<Prop3Link> links;
    bool all_hold = true;
};

// Uses the window estimates; omega is the ordinary-exponent estimate. A link is
// reported as failing only when the enclosures certify the reverse inequality.
Prop3Report check_prop3(const ExponentReport& rep, std::size_t d);
Prop3Report check_prop3(const Interval& omega, const Interval& omega_hat, const Interval& tau, std::size_t d);
Prop3Report check_prop3(const Rat& omega, const Rat& omega_hat, const Rat& tau, std::size_t d);

}  // namespace dioph
