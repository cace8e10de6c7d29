#pragma once

#include "cemax/mdp.hpp"
#include "cemax/rational.hpp"
#include "cemax/scheduler.hpp"

namespace cemax {

struct Scaled {
    Mdp mdp;
    /// lcm of the reward denominators; values of `mdp` are `factor` times the original ones.
    Integer factor = 1;
};

Scaled scale_rationals(const Mdp& m);

/// Multiplies every reward by k.
Mdp scale_rewards(const Mdp& m, const Rational& k);

struct Layered {
    Mdp mdp;
    /// Length of every maximal path.
    Level layers = 0;
    /// Amount added to every reward.
    Rational shift = 0;
    /// layers * shift; the layered value exceeds the original by this.
    Rational offset = 0;
};

/// Pads edges with reward-0 pass-through states so every maximal path has the same length,
/// then adds the shift making all rewards non-negative. F and G must be the same set of traps.
/// Throws NotAcyclic or PreconditionViolated.
Layered layer_acyclic(const Mdp& m);

/// Longest-path height of each state (traps have height 0). Throws NotAcyclic.
std::vector<Level> acyclic_heights(const Mdp& m);

/// Result of an acyclic conditional-expectation optimization.
/// `model` is the canonical scaled model the scheduler refers to; for the minimum its rewards are negated.
struct AcyclicSolution {
    Rational value;
    Mdp model;
    Integer scale = 1;
    RewardBasedScheduler scheduler;
    std::int64_t threshold_calls = 0;
};

/// Maximal conditional expectation of an acyclic model with arbitrary rational rewards.
/// Throws NotAcyclic or PreconditionViolated.
AcyclicSolution max_conditional_acyclic(const Mdp& m);

/// Minimal conditional expectation through negated rewards. Throws NotAcyclic or PreconditionViolated.
AcyclicSolution min_conditional_acyclic(const Mdp& m);

}  // namespace cemax
