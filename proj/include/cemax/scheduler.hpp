#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cemax/mdp.hpp"
#include "cemax/rational.hpp"

namespace cemax {

using Level = std::int64_t;

/// Deterministic scheduler that decides on (state, accumulated reward).
/// Levels at or above the saturation point use the memoryless tail.
struct RewardBasedScheduler {
    Level saturation = 0;
    std::map<std::pair<int, Level>, int> table;
    /// Per state; -1 for traps.
    std::vector<int> tail;

    /// Throws SchedulerIncomplete when no decision is stored.
    int decide(int state, Level level) const;

    bool operator==(const RewardBasedScheduler&) const = default;
};

struct SchedulerValue {
    Rational prob_goal;
    Rational partial_exp;
    std::optional<Rational> cexp;

    bool operator==(const SchedulerValue&) const = default;
};

/// Exact evaluation on the chain over reachable (state, min(level, saturation)) pairs.
/// Requires designated goal and fail traps and no end components.
SchedulerValue evaluate_scheduler(const Mdp& m, const RewardBasedScheduler& sched);

/// Pairs (state, level < saturation) with a non-trap state reachable from (init, 0) under sched.
std::vector<std::pair<int, Level>> reachable_pairs(const Mdp& m, const RewardBasedScheduler& sched);

/// Memoryless scheduler: saturation 0, tail only.
RewardBasedScheduler memoryless(const Mdp& m, std::vector<int> choice);

/// Integer value of an action reward; throws PreconditionViolated for non-integers.
Level integer_reward(const Action& a);

}  // namespace cemax
