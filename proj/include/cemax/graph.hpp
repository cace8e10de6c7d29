#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cemax/mdp.hpp"

namespace cemax {

/// State subset plus per-state enabled-action subset.
struct SubMdp {
    std::vector<char> state;
    std::vector<std::vector<char>> action;

    static SubMdp full(const Mdp& m);
    bool enabled(int s, int a) const { return state[s] && action[s][a]; }
};

/// States reachable from `from`, ascending.
std::vector<int> reachable(const Mdp& m, int from);
std::vector<int> reachable(const Mdp& m, int from, const SubMdp& sub);

/// Tarjan SCC ids; components are numbered in reverse topological order (sinks first).
std::vector<int> scc_ids(const std::vector<std::vector<int>>& adj, int* count = nullptr);

struct EndComponent {
    std::vector<int> states;
    /// Parallel to states: enabled action indices that stay inside.
    std::vector<std::vector<int>> actions;
};

/// Maximal end components among non-trap states of the sub-MDP, ordered by smallest member.
std::vector<EndComponent> max_end_components(const Mdp& m);
std::vector<EndComponent> max_end_components(const Mdp& m, const SubMdp& sub);

/// A cycle as (state, action) steps; the last step leads back to the first state.
struct Cycle {
    std::vector<std::pair<int, int>> steps;
};

/// Nested depth-first search for a cycle through a positive-reward pair, reachable from `from`.
std::optional<Cycle> find_positive_cycle(const Mdp& m, const SubMdp& sub, int from);
bool has_positive_cycle(const Mdp& m, const SubMdp& sub, int from);

struct TopoOrder {
    /// Zero-reward successors precede their sources; empty when a cycle exists.
    std::vector<int> order;
    /// States of a zero-reward cycle, in cycle order; empty when the order exists.
    std::vector<int> cycle;
    bool ok() const { return cycle.empty(); }
};

TopoOrder zero_reward_topo_order(const Mdp& m);

}  // namespace cemax
