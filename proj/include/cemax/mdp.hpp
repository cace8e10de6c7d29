#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cemax/rational.hpp"

namespace cemax {

struct Transition {
    int target = 0;
    Rational prob;

    bool operator==(const Transition&) const = default;
};

struct Action {
    std::string label;
    Rational reward;
    std::vector<Transition> dist;

    bool operator==(const Action&) const = default;
};

/// States and actions are identified by dense index; names and labels are metadata.
/// A state without actions is a trap.
struct Mdp {
    std::vector<std::string> names;
    std::vector<std::vector<Action>> actions;
    int init = 0;
    std::vector<int> f_set;
    std::vector<int> g_set;
    std::optional<int> goal;
    std::optional<int> fail;

    int size() const { return static_cast<int>(names.size()); }
    bool is_trap(int s) const { return actions[s].empty(); }
    int add_state(std::string name);
    /// Index of the named state, or -1.
    int find(const std::string& name) const;

    bool operator==(const Mdp&) const = default;
};

struct ValidationOptions {
    bool allow_negative_rewards = false;
};

/// One entry per broken invariant; empty means valid.
std::vector<std::string> validate_mdp(const Mdp& m, ValidationOptions options = {});

/// Sorts and merges duplicate targets in every distribution.
void normalize_distributions(Mdp& m);

/// Largest number of actions enabled in a single state.
int max_actions(const Mdp& m);
/// Number of state-action pairs.
int pair_count(const Mdp& m);

/// Keeps the states reachable from init (plus goal and fail), preserving relative order.
/// old_to_new receives -1 for dropped states.
Mdp restrict_to_reachable(const Mdp& m, std::vector<int>* old_to_new = nullptr);

}  // namespace cemax
