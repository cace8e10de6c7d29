#pragma once

#include <vector>

#include "cemax/mdp.hpp"

namespace cemax {

enum class Mode { normal, after_g, after_f, goal, fail };

struct Origin {
    /// Index in the input model; -1 for goal and fail.
    int state = -1;
    Mode mode = Mode::normal;

    bool operator==(const Origin&) const = default;
};

/// Mdp with designated traps goal and fail and F = G = {goal}.
struct CanonicalMdp {
    Mdp mdp;
    /// Per canonical state. After a MEC quotient, the entry of the smallest member.
    std::vector<Origin> origin;
};

/// Product with modes normal / afterG / afterF, cleanup, removal of afterG states that may miss F,
/// collapse of hopeless states into fail and iota-exits to fail.
/// Rewards may be rational; negative rewards are accepted but only meaningful on acyclic input.
/// Throws PreconditionViolated when init lies in F or G, or no scheduler reaches G with F certain.
CanonicalMdp normal_form(const Mdp& m);

/// True iff some scheduler reaches G with positive probability and then F almost surely.
/// Throws PreconditionViolated when init lies in F or G.
bool check_precondition(const Mdp& m);

/// Collapses every maximal end component into the position of its smallest member.
/// Exit actions of multi-member classes are relabeled "member.label"; internal actions are dropped.
/// class_of receives the quotient index of each input state.
/// Throws PositiveEcPresent when an end component holds a positive reward.
Mdp mec_quotient(const Mdp& m, std::vector<int>* class_of = nullptr);

/// Violations of: goal and fail are the only traps, every state but fail reaches goal, no end components.
std::vector<std::string> canonical_violations(const Mdp& m);

}  // namespace cemax
