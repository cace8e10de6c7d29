#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "cemax/mdp.hpp"
#include "cemax/rational.hpp"
#include "cemax/saturation.hpp"
#include "cemax/scheduler.hpp"
#include "cemax/threshold.hpp"

namespace cemax {

/// Candidate thresholds of one level: r + (theta_{s,r} - theta_{s,r,a}) / (y_{s,r} - y_{s,r,a})
/// over pairs with y_{s,r} > y_{s,r,a}; `up` keeps those >= current, `below_b` those < b.
struct ImprovementSets {
    std::set<Rational> all;
    std::set<Rational> up;
    std::set<Rational> below_b;
};

ImprovementSets improvement_sets(const Mdp& m, const ValueTables& t, Level r, const Rational& current,
                                 const Rational& b);

struct OptimizeStats {
    std::int64_t threshold_calls = 0;
    /// Calls made while treating each level, indexed by level.
    std::vector<std::int64_t> calls_per_level;
    /// Conditional expectations of the successive current schedulers.
    std::vector<Rational> accepted;
    std::int64_t violations = 0;
    /// Interval bounds after each refinement.
    std::vector<std::pair<Rational, Rational>> intervals;
};

struct Optimum {
    Rational value;
    RewardBasedScheduler scheduler;
    OptimizeStats stats;
};

struct OptimizeOptions {
    /// Skip recomputing levels above the current one inside threshold calls.
    bool reuse_levels = true;
    bool sweep = true;
};

/// Requires a finite canonical model with integer rewards; ce_ub bounds the optimum from above.
Optimum scheduler_improvement(const Mdp& m, const Saturation& sat, const Rational& ce_ub,
                              const OptimizeOptions& options = {});

/// Repeats the threshold algorithm at the value of the current scheduler until it is reproduced.
Optimum naive_loop(const Mdp& m, const Saturation& sat, const OptimizeOptions& options = {});

}  // namespace cemax
