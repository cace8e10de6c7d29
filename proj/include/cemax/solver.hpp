#pragma once

#include <optional>

#include "cemax/finiteness.hpp"
#include "cemax/mdp.hpp"
#include "cemax/optimize.hpp"
#include "cemax/rational.hpp"
#include "cemax/saturation.hpp"
#include "cemax/threshold.hpp"

namespace cemax {

struct SolveOptions {
    bool naive = false;
    OptimizeOptions optimize;
};

/// Full pipeline on an input model. Scheduler, saturation and bound refer to the canonical model
/// (scaled units); `value` and `upper_bound` are in the input's units.
struct Answer {
    Verdict verdict;
    std::optional<Rational> value;
    std::optional<Rational> upper_bound;
    Saturation saturation;
    RewardBasedScheduler scheduler;
    OptimizeStats stats;

    bool finite() const { return verdict.finite; }
    const Mdp& canonical() const { return verdict.canonical.mdp; }
};

/// Finite verdict plus bound and saturation; shared prefix of every query.
struct Prepared {
    Verdict verdict;
    /// Scaled units.
    Rational scaled_bound;
    Saturation saturation;
};

/// Throws PreconditionViolated.
Prepared prepare(const Mdp& m);

Answer solve(const Mdp& m, const SolveOptions& options = {});

struct ThresholdQuery {
    bool finite = false;
    bool holds = false;
    ThresholdAnswer answer;
    Verdict verdict;
};

/// Decides whether the maximum stands in `rel` to `threshold` (input units). Infinite maxima
/// satisfy ge and gt only.
ThresholdQuery threshold_query(const Mdp& m, const Rational& threshold, Relation rel);

}  // namespace cemax
