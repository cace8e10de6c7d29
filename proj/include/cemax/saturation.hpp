#pragma once

#include <optional>
#include <vector>

#include "cemax/mdp.hpp"
#include "cemax/rational.hpp"
#include "cemax/scheduler.hpp"

namespace cemax {

/// The memoryless scheduler that maximizes the goal probability and, among those, the partial
/// expectation; plus the quantity D and the saturation point.
struct Saturation {
    /// Per state; -1 for traps.
    std::vector<int> choice;
    std::vector<Rational> y;
    std::vector<Rational> theta;
    /// Absent when no action loses goal probability; the scheduler is then optimal.
    std::optional<Rational> d;
    Level point = 0;

    bool trivial() const { return !d.has_value(); }
    /// Conditional expectation of the scheduler from init; requires y[init] > 0.
    Rational value(int init) const { return theta[init] / y[init]; }
};

/// Requires a canonical model with integer rewards.
Saturation max_prob_scheduler(const Mdp& m);

/// Fills d and point; point stays 0 when trivial.
void saturation_point(const Mdp& m, const Rational& ce_ub, Saturation& sat);

Saturation compute_saturation(const Mdp& m, const Rational& ce_ub);

/// One-step values of action a at s against per-state vectors y and theta.
std::pair<Rational, Rational> action_values(const Action& a, const std::vector<Rational>& y,
                                            const std::vector<Rational>& theta);

}  // namespace cemax
