#include "cemax/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace cemax {

SubMdp SubMdp::full(const Mdp& m) {
    SubMdp sub;
    sub.state.assign(m.size(), 1);
    sub.action.resize(m.size());
    for (int s = 0; s < m.size(); ++s) {
        sub.action[s].assign(m.actions[s].size(), 1);
    }
    return sub;
}

std::vector<int> reachable(const Mdp& m, int from) { return reachable(m, from, SubMdp::full(m)); }

std::vector<int> reachable(const Mdp& m, int from, const SubMdp& sub) {
    std::vector<char> seen(m.size(), 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            if (!sub.enabled(s, static_cast<int>(a))) {
                continue;
            }
            for (const auto& t : m.actions[s][a].dist) {
                if (sub.state[t.target] && !seen[t.target]) {
                    seen[t.target] = 1;
                    stack.push_back(t.target);
                }
            }
        }
    }
    std::vector<int> out;
    for (int s = 0; s < m.size(); ++s) {
        if (seen[s]) {
            out.push_back(s);
        }
    }
    return out;
}

std::vector<int> scc_ids(const std::vector<std::vector<int>>& adj, int* count) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    std::vector<std::pair<int, std::size_t>> call;
    int next_index = 0;
    int next_comp = 0;
    for (int root = 0; root < n; ++root) {
        if (index[root] >= 0) {
            continue;
        }
        call.emplace_back(root, 0);
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, i] = call.back();
            if (i < adj[v].size()) {
                int w = adj[v][i++];
                if (index[w] < 0) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            int done = v;
            call.pop_back();
            if (!call.empty()) {
                int parent = call.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
            if (low[done] == index[done]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = next_comp;
                } while (w != done);
                ++next_comp;
            }
        }
    }
    if (count) {
        *count = next_comp;
    }
    return comp;
}

std::vector<EndComponent> max_end_components(const Mdp& m) { return max_end_components(m, SubMdp::full(m)); }

std::vector<EndComponent> max_end_components(const Mdp& m, const SubMdp& sub) {
    const int n = m.size();
    std::vector<char> alive(n, 0);
    std::vector<std::vector<char>> en(n);
    for (int s = 0; s < n; ++s) {
        en[s].assign(m.actions[s].size(), 0);
        if (!sub.state[s]) {
            continue;
        }
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            if (!sub.action[s][a]) {
                continue;
            }
            bool inside = std::all_of(m.actions[s][a].dist.begin(), m.actions[s][a].dist.end(),
                                      [&](const Transition& t) { return sub.state[t.target] != 0; });
            en[s][a] = inside;
            alive[s] = alive[s] || inside;
        }
    }
    std::vector<int> comp;
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<std::vector<int>> adj(n);
        for (int s = 0; s < n; ++s) {
            if (!alive[s]) {
                continue;
            }
            for (std::size_t a = 0; a < en[s].size(); ++a) {
                if (en[s][a]) {
                    for (const auto& t : m.actions[s][a].dist) {
                        adj[s].push_back(t.target);
                    }
                }
            }
        }
        comp = scc_ids(adj);
        for (int s = 0; s < n; ++s) {
            if (!alive[s]) {
                continue;
            }
            bool any = false;
            for (std::size_t a = 0; a < en[s].size(); ++a) {
                if (!en[s][a]) {
                    continue;
                }
                for (const auto& t : m.actions[s][a].dist) {
                    if (!alive[t.target] || comp[t.target] != comp[s]) {
                        en[s][a] = 0;
                        changed = true;
                        break;
                    }
                }
                any = any || en[s][a];
            }
            if (!any) {
                alive[s] = 0;
                changed = true;
            }
        }
    }
    std::map<int, int> slot;
    std::vector<EndComponent> out;
    for (int s = 0; s < n; ++s) {
        if (!alive[s]) {
            continue;
        }
        auto [it, fresh] = slot.emplace(comp[s], static_cast<int>(out.size()));
        if (fresh) {
            out.emplace_back();
        }
        auto& ec = out[it->second];
        ec.states.push_back(s);
        ec.actions.emplace_back();
        for (std::size_t a = 0; a < en[s].size(); ++a) {
            if (en[s][a]) {
                ec.actions.back().push_back(static_cast<int>(a));
            }
        }
    }
    return out;
}

namespace {

// Expanded graph: node s < n is a state, node n + k is the k-th enabled state-action pair.
struct PairGraph {
    int n = 0;
    std::vector<std::pair<int, int>> pairs;
    std::vector<std::vector<int>> succ;
    std::vector<char> accepting;
};

PairGraph expand(const Mdp& m, const SubMdp& sub) {
    PairGraph g;
    g.n = m.size();
    g.succ.resize(g.n);
    g.accepting.assign(g.n, 0);
    for (int s = 0; s < g.n; ++s) {
        if (!sub.state[s]) {
            continue;
        }
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            if (!sub.action[s][a]) {
                continue;
            }
            int node = g.n + static_cast<int>(g.pairs.size());
            g.pairs.emplace_back(s, static_cast<int>(a));
            g.succ[s].push_back(node);
            g.succ.emplace_back();
            g.accepting.push_back(m.actions[s][a].reward > 0 ? 1 : 0);
            for (const auto& t : m.actions[s][a].dist) {
                if (sub.state[t.target]) {
                    g.succ[node].push_back(t.target);
                }
            }
        }
    }
    return g;
}

}  // namespace

std::optional<Cycle> find_positive_cycle(const Mdp& m, const SubMdp& sub, int from) {
    if (!sub.state[from]) {
        return std::nullopt;
    }
    PairGraph g = expand(m, sub);
    const std::size_t total = g.succ.size();
    std::vector<char> outer(total, 0), inner(total, 0);
    std::vector<std::pair<int, std::size_t>> stack1{{from, 0}};
    outer[from] = 1;
    while (!stack1.empty()) {
        auto& [v, i] = stack1.back();
        if (i < g.succ[v].size()) {
            int w = g.succ[v][i++];
            if (!outer[w]) {
                outer[w] = 1;
                stack1.emplace_back(w, 0);
            }
            continue;
        }
        int done = v;
        stack1.pop_back();
        if (!g.accepting[done]) {
            continue;
        }
        // Inner search from the seed; the visited set is shared across seeds.
        int seed = done;
        std::vector<std::pair<int, std::size_t>> stack2{{seed, 0}};
        inner[seed] = 1;
        while (!stack2.empty()) {
            auto& [u, j] = stack2.back();
            if (j >= g.succ[u].size()) {
                stack2.pop_back();
                continue;
            }
            int w = g.succ[u][j++];
            if (w == seed) {
                Cycle c;
                for (const auto& frame : stack2) {
                    if (frame.first >= g.n) {
                        c.steps.push_back(g.pairs[frame.first - g.n]);
                    }
                }
                return c;
            }
            if (!inner[w]) {
                inner[w] = 1;
                stack2.emplace_back(w, 0);
            }
        }
    }
    return std::nullopt;
}

bool has_positive_cycle(const Mdp& m, const SubMdp& sub, int from) {
    return find_positive_cycle(m, sub, from).has_value();
}

TopoOrder zero_reward_topo_order(const Mdp& m) {
    const int n = m.size();
    std::vector<std::vector<int>> adj(n);
    for (int s = 0; s < n; ++s) {
        for (const auto& a : m.actions[s]) {
            if (a.reward != 0) {
                continue;
            }
            for (const auto& t : a.dist) {
                adj[s].push_back(t.target);
            }
        }
    }
    TopoOrder out;
    std::vector<char> color(n, 0);
    for (int root = 0; root < n; ++root) {
        if (color[root]) {
            continue;
        }
        std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
        color[root] = 1;
        while (!stack.empty()) {
            auto& [v, i] = stack.back();
            if (i < adj[v].size()) {
                int w = adj[v][i++];
                if (color[w] == 1) {
                    auto start = std::find_if(stack.begin(), stack.end(), [w](const auto& f) { return f.first == w; });
                    for (auto it = start; it != stack.end(); ++it) {
                        out.cycle.push_back(it->first);
                    }
                    out.order.clear();
                    return out;
                }
                if (color[w] == 0) {
                    color[w] = 1;
                    stack.emplace_back(w, 0);
                }
                continue;
            }
            color[v] = 2;
            out.order.push_back(v);
            stack.pop_back();
        }
    }
    return out;
}

}  // namespace cemax
