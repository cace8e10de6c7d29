#pragma once

#include "cemax/mdp.hpp"
#include "cemax/rational.hpp"
#include "cemax/scheduler.hpp"

namespace cemax {

/// Sum over states of the largest action reward.
Level counter_limit(const Mdp& m);

/// Reward-counter product: pairs <s,r> (r <= limit) earning nothing, then a copy of the model
/// entered when the counter would exceed the limit, earning the counter on the switch.
/// Counter copies of goal move to the copy's goal earning r. Only states reachable from <init,0>.
/// With `reset`, fail in both modes moves back to <init,0> with reward 0.
/// The result has goal set to the copy's goal and no fail.
Mdp reward_counter_product(const Mdp& m, bool reset);

/// Upper bound on the maximal conditional expectation of a canonical model with integer rewards.
/// Throws PreconditionViolated when the reset model has a positive end component.
Rational upper_bound(const Mdp& m);

}  // namespace cemax
