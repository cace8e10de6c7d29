#pragma once

#include <utility>
#include <vector>

#include "cemax/mdp.hpp"
#include "cemax/rational.hpp"

namespace cemax {

struct LinearSystem {
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
};

/// Exact Gaussian elimination. Throws Singular.
std::vector<Rational> solve_linear(const LinearSystem& sys);

using SparseRow = std::vector<std::pair<int, Rational>>;

/// Solves v = b + P v for a substochastic P whose chain leaves every node almost surely.
/// Works block-wise on strongly connected components. Throws Singular.
std::vector<Rational> solve_chain(const std::vector<SparseRow>& p, const std::vector<Rational>& b);

/// Per-state values with a memoryless witness (-1 where no choice is made).
struct ValueVector {
    std::vector<Rational> values;
    std::vector<int> witness;
};

/// Per-state enabled-action subset; an empty mask means all actions.
using ActionMask = std::vector<std::vector<char>>;

ValueVector max_reach_prob(const Mdp& m, const std::vector<char>& target, const ActionMask& allowed = {});
ValueVector min_reach_prob(const Mdp& m, const std::vector<char>& target, const ActionMask& allowed = {});

/// Maximal expected accumulated reward until an absorbing state (value 0) or trap is reached.
/// Policy iteration with exact evaluation; ties keep the current action, improvements take the
/// lowest index among the best. `trace` receives the value vector of every evaluated policy.
/// Throws PreconditionViolated when an end component exists among the non-absorbing states.
ValueVector max_total_exp(const Mdp& m, const std::vector<char>& absorbing, const ActionMask& allowed = {},
                          std::vector<std::vector<Rational>>* trace = nullptr);
ValueVector min_total_exp(const Mdp& m, const std::vector<char>& absorbing, const ActionMask& allowed = {});

/// Target-mask helper.
std::vector<char> mask_of(int n, const std::vector<int>& states);

}  // namespace cemax
