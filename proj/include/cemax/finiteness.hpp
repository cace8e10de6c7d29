#pragma once

#include <optional>

#include "cemax/graph.hpp"
#include "cemax/mdp.hpp"
#include "cemax/preprocess.hpp"
#include "cemax/rational.hpp"

namespace cemax {

/// Outcome of the finiteness check.
/// Infinite: `witness_model` is the model the witness indices refer to (the scaled normal form for an
/// end-component witness, the canonical model for a cycle witness).
/// Finite: `canonical` is goal/fail-canonical with integer rewards, `scale` the reward multiplier applied.
struct Verdict {
    bool finite = false;
    CanonicalMdp canonical;
    Integer scale = 1;
    Mdp witness_model;
    std::optional<EndComponent> positive_ec;
    std::optional<Cycle> cycle;
};

/// An end component avoiding goal and fail that contains a positive-reward pair.
std::optional<EndComponent> positive_end_component(const Mdp& m);

/// Largest sub-MDP that avoids goal: goal, actions touching goal and emptied states are removed
/// until stable, then actions into removed states. Fail is kept.
SubMdp without_goal(const Mdp& m);

/// Positive cycle reachable from init inside without_goal(m). Requires designated goal.
std::optional<Cycle> critical_cycle(const Mdp& m);

/// Rewards must be non-negative. Throws PreconditionViolated.
Verdict check_finiteness(const Mdp& m);

}  // namespace cemax
