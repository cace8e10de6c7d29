#pragma once

#include <utility>
#include <vector>

#include "cemax/mdp.hpp"
#include "cemax/rational.hpp"
#include "cemax/saturation.hpp"
#include "cemax/scheduler.hpp"

namespace cemax {

/// Reward-based schedulers that follow the saturation scheduler from the saturation point on.
struct SchedulerSpace {
    Level saturation = 0;
    /// Pairs (state, level < saturation) reachable under some scheduler, sorted.
    std::vector<std::pair<int, Level>> pairs;
    /// Number of schedulers (product of action counts over pairs); a double to survive overflow.
    double size = 1;
};

SchedulerSpace scheduler_space(const Mdp& m, const Saturation& sat);

struct OracleResult {
    Rational value;
    RewardBasedScheduler scheduler;
    double explored = 0;
};

/// Exact maximum over the space among schedulers reaching goal with positive probability.
/// Requires a finite canonical model with integer rewards. Throws SpaceTooLarge above cap.
OracleResult brute_force_max(const Mdp& m, const Saturation& sat, double cap = 1e6);

}  // namespace cemax
