#include "cemax/reach.hpp"

#include <algorithm>
#include <map>

#include "cemax/errors.hpp"
#include "cemax/graph.hpp"

namespace cemax {

std::vector<Rational> solve_linear(const LinearSystem& sys) {
    const std::size_t n = sys.b.size();
    if (sys.a.size() != n) {
        throw Singular("matrix is not square");
    }
    auto a = sys.a;
    auto b = sys.b;
    for (std::size_t col = 0; col < n; ++col) {
        if (a[col].size() != n) {
            throw Singular("matrix is not square");
        }
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) {
            ++pivot;
        }
        if (pivot == n) {
            throw Singular("zero pivot column " + std::to_string(col));
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) {
                continue;
            }
            Rational f = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) {
                if (a[col][k] != 0) {
                    a[row][k] -= f * a[col][k];
                }
            }
            b[row] -= f * b[col];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = b[i] / a[i][i];
    }
    return x;
}

std::vector<Rational> solve_chain(const std::vector<SparseRow>& p, const std::vector<Rational>& b) {
    const int n = static_cast<int>(p.size());
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i) {
        for (const auto& [j, q] : p[i]) {
            adj[i].push_back(j);
        }
    }
    int count = 0;
    std::vector<int> comp = scc_ids(adj, &count);
    std::vector<std::vector<int>> members(count);
    for (int i = 0; i < n; ++i) {
        members[comp[i]].push_back(i);
    }
    std::vector<Rational> x(n);
    std::vector<int> local(n, -1);
    // Component ids are sink-first, so successors outside a component are already solved.
    for (int c = 0; c < count; ++c) {
        const auto& mem = members[c];
        const std::size_t k = mem.size();
        for (std::size_t i = 0; i < k; ++i) {
            local[mem[i]] = static_cast<int>(i);
        }
        LinearSystem sys;
        sys.a.assign(k, std::vector<Rational>(k));
        sys.b.assign(k, Rational(0));
        for (std::size_t i = 0; i < k; ++i) {
            int row = mem[i];
            sys.a[i][i] += 1;
            sys.b[i] += b[row];
            for (const auto& [j, q] : p[row]) {
                if (comp[j] == c) {
                    sys.a[i][local[j]] -= q;
                } else {
                    sys.b[i] += q * x[j];
                }
            }
        }
        if (k == 1) {
            if (sys.a[0][0] == 0) {
                throw Singular("chain does not leave node " + std::to_string(mem[0]));
            }
            x[mem[0]] = sys.b[0] / sys.a[0][0];
            continue;
        }
        auto sol = solve_linear(sys);
        for (std::size_t i = 0; i < k; ++i) {
            x[mem[i]] = sol[i];
        }
    }
    return x;
}

std::vector<char> mask_of(int n, const std::vector<int>& states) {
    std::vector<char> mask(n, 0);
    for (int s : states) {
        mask[s] = 1;
    }
    return mask;
}

namespace {

bool allowed_action(const ActionMask& allowed, int s, int a) { return allowed.empty() || allowed[s][a]; }

bool has_allowed(const Mdp& m, const ActionMask& allowed, int s) {
    for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
        if (allowed_action(allowed, s, static_cast<int>(a))) {
            return true;
        }
    }
    return false;
}

// Stochastic shortest-path instance over abstract nodes; every policy must be proper.
struct Ssp {
    struct Choice {
        int tag = 0;
        Rational reward;
        SparseRow dist;
    };
    std::vector<char> absorbing;
    std::vector<Rational> terminal;
    std::vector<std::vector<Choice>> choices;
};

struct SspSolution {
    std::vector<Rational> values;
    std::vector<int> policy;
};

Rational q_value(const Ssp::Choice& c, const std::vector<Rational>& v) {
    Rational q = c.reward;
    for (const auto& [t, pr] : c.dist) {
        q += pr * v[t];
    }
    return q;
}

SspSolution policy_iteration(const Ssp& ssp, bool maximize, std::vector<std::vector<Rational>>* trace) {
    const int n = static_cast<int>(ssp.absorbing.size());
    std::vector<int> compact(n, -1);
    std::vector<int> nodes;
    for (int i = 0; i < n; ++i) {
        if (!ssp.absorbing[i]) {
            compact[i] = static_cast<int>(nodes.size());
            nodes.push_back(i);
        }
    }
    SspSolution sol;
    sol.policy.assign(n, -1);
    for (int i : nodes) {
        sol.policy[i] = 0;
    }
    std::vector<Rational> v(n);
    for (int i = 0; i < n; ++i) {
        if (ssp.absorbing[i]) {
            v[i] = ssp.terminal[i];
        }
    }
    while (true) {
        std::vector<SparseRow> p(nodes.size());
        std::vector<Rational> b(nodes.size());
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const auto& c = ssp.choices[nodes[k]][sol.policy[nodes[k]]];
            b[k] = c.reward;
            for (const auto& [t, pr] : c.dist) {
                if (ssp.absorbing[t]) {
                    b[k] += pr * ssp.terminal[t];
                } else {
                    p[k].emplace_back(compact[t], pr);
                }
            }
        }
        auto x = solve_chain(p, b);
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            v[nodes[k]] = x[k];
        }
        if (trace) {
            trace->push_back(v);
        }
        bool changed = false;
        for (int i : nodes) {
            const auto& cs = ssp.choices[i];
            Rational current = q_value(cs[sol.policy[i]], v);
            int best = -1;
            Rational best_q;
            for (std::size_t c = 0; c < cs.size(); ++c) {
                Rational q = q_value(cs[c], v);
                if (best < 0 || (maximize ? q > best_q : q < best_q)) {
                    best = static_cast<int>(c);
                    best_q = q;
                }
            }
            if (maximize ? best_q > current : best_q < current) {
                sol.policy[i] = best;
                changed = true;
            }
        }
        if (!changed) {
            break;
        }
    }
    sol.values = std::move(v);
    return sol;
}

void require_no_end_component(const Mdp& m, const std::vector<char>& absorbing, const ActionMask& allowed) {
    SubMdp sub = SubMdp::full(m);
    for (int s = 0; s < m.size(); ++s) {
        sub.state[s] = !absorbing[s];
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            sub.action[s][a] = allowed_action(allowed, s, static_cast<int>(a));
        }
    }
    auto ecs = max_end_components(m, sub);
    if (!ecs.empty()) {
        throw PreconditionViolated("end component among non-absorbing states at '" + m.names[ecs.front().states.front()] +
                                   "'");
    }
}

ValueVector total_exp(const Mdp& m, const std::vector<char>& absorbing_in, const ActionMask& allowed, bool maximize,
                      std::vector<std::vector<Rational>>* trace) {
    const int n = m.size();
    std::vector<char> absorbing(n, 0);
    for (int s = 0; s < n; ++s) {
        absorbing[s] = absorbing_in[s] || !has_allowed(m, allowed, s);
    }
    require_no_end_component(m, absorbing, allowed);
    Ssp ssp;
    ssp.absorbing = absorbing;
    ssp.terminal.assign(n, Rational(0));
    ssp.choices.resize(n);
    for (int s = 0; s < n; ++s) {
        if (absorbing[s]) {
            continue;
        }
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            if (!allowed_action(allowed, s, static_cast<int>(a))) {
                continue;
            }
            Ssp::Choice c;
            c.tag = static_cast<int>(a);
            c.reward = m.actions[s][a].reward;
            for (const auto& t : m.actions[s][a].dist) {
                c.dist.emplace_back(t.target, t.prob);
            }
            ssp.choices[s].push_back(std::move(c));
        }
    }
    auto sol = policy_iteration(ssp, maximize, trace);
    ValueVector out;
    out.values = std::move(sol.values);
    out.witness.assign(n, -1);
    for (int s = 0; s < n; ++s) {
        if (sol.policy[s] >= 0) {
            out.witness[s] = ssp.choices[s][sol.policy[s]].tag;
        }
    }
    return out;
}

Rational expected(const Action& a, const std::vector<Rational>& v) {
    Rational e = 0;
    for (const auto& t : a.dist) {
        e += t.prob * v[t.target];
    }
    return e;
}

}  // namespace

ValueVector max_total_exp(const Mdp& m, const std::vector<char>& absorbing, const ActionMask& allowed,
                          std::vector<std::vector<Rational>>* trace) {
    return total_exp(m, absorbing, allowed, true, trace);
}

ValueVector min_total_exp(const Mdp& m, const std::vector<char>& absorbing, const ActionMask& allowed) {
    return total_exp(m, absorbing, allowed, false, nullptr);
}

ValueVector max_reach_prob(const Mdp& m, const std::vector<char>& target, const ActionMask& allowed) {
    const int n = m.size();
    // Backward reachability of the target.
    std::vector<char> can(target.begin(), target.end());
    for (bool changed = true; changed;) {
        changed = false;
        for (int s = 0; s < n; ++s) {
            if (can[s]) {
                continue;
            }
            for (std::size_t a = 0; a < m.actions[s].size() && !can[s]; ++a) {
                if (!allowed_action(allowed, s, static_cast<int>(a))) {
                    continue;
                }
                for (const auto& t : m.actions[s][a].dist) {
                    if (can[t.target]) {
                        can[s] = 1;
                        changed = true;
                        break;
                    }
                }
            }
        }
    }
    SubMdp sub = SubMdp::full(m);
    for (int s = 0; s < n; ++s) {
        sub.state[s] = can[s] && !target[s];
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            sub.action[s][a] = allowed_action(allowed, s, static_cast<int>(a));
        }
    }
    // Collapse end components; node ids: one per class of undecided states, then the rest as-is.
    std::vector<int> node(n, -1);
    int nodes = 0;
    for (const auto& ec : max_end_components(m, sub)) {
        for (int s : ec.states) {
            node[s] = nodes;
        }
        ++nodes;
    }
    for (int s = 0; s < n; ++s) {
        if (node[s] < 0) {
            node[s] = nodes++;
        }
    }
    Ssp ssp;
    ssp.absorbing.assign(nodes, 0);
    ssp.terminal.assign(nodes, Rational(0));
    ssp.choices.resize(nodes);
    for (int s = 0; s < n; ++s) {
        if (!sub.state[s]) {
            ssp.absorbing[node[s]] = 1;
            ssp.terminal[node[s]] = target[s] ? 1 : 0;
            continue;
        }
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            if (!sub.action[s][a]) {
                continue;
            }
            std::map<int, Rational> dist;
            bool leaves = false;
            for (const auto& t : m.actions[s][a].dist) {
                dist[node[t.target]] += t.prob;
                leaves = leaves || node[t.target] != node[s];
            }
            if (!leaves) {
                continue;
            }
            Ssp::Choice c;
            c.dist.assign(dist.begin(), dist.end());
            ssp.choices[node[s]].push_back(std::move(c));
        }
    }
    for (int k = 0; k < nodes; ++k) {
        if (!ssp.absorbing[k] && ssp.choices[k].empty()) {
            throw InternalError("undecided class without exit in reachability quotient");
        }
    }
    auto sol = policy_iteration(ssp, true, nullptr);
    ValueVector out;
    out.values.resize(n);
    out.witness.assign(n, -1);
    for (int s = 0; s < n; ++s) {
        out.values[s] = sol.values[node[s]];
    }
    // Witness: backward closure from the target over value-consistent actions.
    std::vector<char> closed(target.begin(), target.end());
    for (bool changed = true; changed;) {
        changed = false;
        for (int s = 0; s < n; ++s) {
            if (closed[s] || out.values[s] == 0) {
                continue;
            }
            for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
                if (!allowed_action(allowed, s, static_cast<int>(a))) {
                    continue;
                }
                const auto& act = m.actions[s][a];
                if (expected(act, out.values) != out.values[s]) {
                    continue;
                }
                bool hits = std::any_of(act.dist.begin(), act.dist.end(),
                                        [&](const Transition& t) { return closed[t.target] != 0; });
                if (hits) {
                    out.witness[s] = static_cast<int>(a);
                    closed[s] = 1;
                    changed = true;
                    break;
                }
            }
        }
    }
    for (int s = 0; s < n; ++s) {
        if (target[s] || out.witness[s] >= 0) {
            continue;
        }
        if (out.values[s] != 0) {
            throw InternalError("reachability witness did not cover state '" + m.names[s] + "'");
        }
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            if (allowed_action(allowed, s, static_cast<int>(a))) {
                out.witness[s] = static_cast<int>(a);
                break;
            }
        }
    }
    return out;
}

ValueVector min_reach_prob(const Mdp& m, const std::vector<char>& target, const ActionMask& allowed) {
    const int n = m.size();
    // Greatest set of non-target states in which some scheduler can stay forever.
    std::vector<char> avoid(n, 0);
    for (int s = 0; s < n; ++s) {
        avoid[s] = !target[s];
    }
    auto stays = [&](int s, std::size_t a) {
        return std::all_of(m.actions[s][a].dist.begin(), m.actions[s][a].dist.end(),
                           [&](const Transition& t) { return avoid[t.target] != 0; });
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (int s = 0; s < n; ++s) {
            if (!avoid[s] || !has_allowed(m, allowed, s)) {
                continue;
            }
            bool ok = false;
            for (std::size_t a = 0; a < m.actions[s].size() && !ok; ++a) {
                ok = allowed_action(allowed, s, static_cast<int>(a)) && stays(s, a);
            }
            if (!ok) {
                avoid[s] = 0;
                changed = true;
            }
        }
    }
    Ssp ssp;
    ssp.absorbing.assign(n, 0);
    ssp.terminal.assign(n, Rational(0));
    ssp.choices.resize(n);
    for (int s = 0; s < n; ++s) {
        if (target[s] || avoid[s]) {
            ssp.absorbing[s] = 1;
            ssp.terminal[s] = target[s] ? 1 : 0;
            continue;
        }
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            if (!allowed_action(allowed, s, static_cast<int>(a))) {
                continue;
            }
            Ssp::Choice c;
            c.tag = static_cast<int>(a);
            for (const auto& t : m.actions[s][a].dist) {
                c.dist.emplace_back(t.target, t.prob);
            }
            ssp.choices[s].push_back(std::move(c));
        }
    }
    auto sol = policy_iteration(ssp, false, nullptr);
    ValueVector out;
    out.values = std::move(sol.values);
    out.witness.assign(n, -1);
    for (int s = 0; s < n; ++s) {
        if (target[s]) {
            continue;
        }
        if (avoid[s]) {
            for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
                if (allowed_action(allowed, s, static_cast<int>(a)) && stays(s, a)) {
                    out.witness[s] = static_cast<int>(a);
                    break;
                }
            }
            continue;
        }
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            if (allowed_action(allowed, s, static_cast<int>(a)) && expected(m.actions[s][a], out.values) == out.values[s]) {
                out.witness[s] = static_cast<int>(a);
                break;
            }
        }
    }
    return out;
}

}  // namespace cemax
