#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cemax/mdp.hpp"
#include "cemax/rational.hpp"
#include "cemax/reach.hpp"
#include "cemax/saturation.hpp"
#include "cemax/scheduler.hpp"

namespace cemax {

/// Rows indexed by level 0..saturation, columns by state.
struct ValueTables {
    Level saturation = 0;
    std::vector<std::vector<Rational>> y;
    std::vector<std::vector<Rational>> theta;
    /// -1 for traps.
    std::vector<std::vector<int>> action;
};

enum class Relation { ge, gt, le, lt };

struct ThresholdOptions {
    /// Use the topological sweep when the zero-reward graph is acyclic.
    bool sweep = true;
    /// Rows above frozen_level are copied from *frozen instead of being recomputed.
    const ValueTables* frozen = nullptr;
    Level frozen_level = -1;
};

struct ThresholdAnswer {
    bool yes = false;
    Rational prob;
    Rational partial;
    std::optional<Rational> value;
    /// Returned for both answers.
    RewardBasedScheduler scheduler;
    ValueTables tables;
    /// Pairs breaking the per-level difference inequality; zero when the algorithm is sound.
    std::int64_t violations = 0;
};

/// Goal probability and partial expectation of taking action a at (s, r) and following the tables.
/// Zero-reward actions read row r, which must already be filled.
std::pair<Rational, Rational> pair_values(const Mdp& m, const ValueTables& t, int s, int a, Level r);

struct LevelSolution {
    std::vector<Rational> x;
    ActionMask act_star;
};

/// Optimal values of the level-r linear program via total reward in the auxiliary model, and the
/// actions attaining them. Rows above r must be filled.
LevelSolution level_values(const Mdp& m, const ValueTables& t, Level r, const Rational& threshold);

/// Requires a finite canonical model with integer rewards and threshold >= 0.
ThresholdAnswer threshold_solve(const Mdp& m, const Rational& threshold, const Saturation& sat,
                                const ThresholdOptions& options = {});

bool decide(const ThresholdAnswer& answer, const Rational& threshold, Relation rel);

/// Memoized recursion over (state, accumulated reward) on an acyclic model with designated goal and
/// fail and integer rewards of any sign. Throws NotAcyclic.
ThresholdAnswer threshold_acyclic(const Mdp& m, const Rational& threshold);

/// Table over the pairs reachable from (init, 0) below the saturation point; tail from the top row.
RewardBasedScheduler scheduler_from_tables(const Mdp& m, const ValueTables& t);

}  // namespace cemax
