#include "cemax/preprocess.hpp"

#include <algorithm>
#include <set>

#include "cemax/errors.hpp"
#include "cemax/graph.hpp"
#include "cemax/reach.hpp"

namespace cemax {

namespace {

struct Work {
    Mdp m;
    std::vector<Origin> origin;
};

void prune(Work& w) {
    std::vector<int> map;
    Mdp next = restrict_to_reachable(w.m, &map);
    std::vector<Origin> origin(next.size());
    for (int s = 0; s < static_cast<int>(map.size()); ++s) {
        if (map[s] >= 0) {
            origin[map[s]] = w.origin[s];
        }
    }
    w.m = std::move(next);
    w.origin = std::move(origin);
}

// Sends every transition into `into` to state z and empties the states of `into`.
void redirect(Mdp& m, const std::vector<char>& into, int z) {
    for (int s = 0; s < m.size(); ++s) {
        if (into[s] && s != z) {
            m.actions[s].clear();
            continue;
        }
        for (auto& a : m.actions[s]) {
            for (auto& t : a.dist) {
                if (into[t.target]) {
                    t.target = z;
                }
            }
        }
    }
    normalize_distributions(m);
}

std::string fresh_label(const std::vector<Action>& acts, const std::string& base) {
    auto taken = [&](const std::string& l) {
        return std::any_of(acts.begin(), acts.end(), [&](const Action& a) { return a.label == l; });
    };
    std::string label = base;
    for (int k = 1; taken(label); ++k) {
        label = base + "_" + std::to_string(k);
    }
    return label;
}

Action jump(int target, Rational reward, const char* label = "tau") {
    Action a;
    a.label = label;
    a.reward = std::move(reward);
    a.dist.push_back({target, Rational(1)});
    return a;
}

std::vector<char> members(int n, const std::vector<int>& states) { return mask_of(n, states); }

}  // namespace

CanonicalMdp normal_form(const Mdp& input) {
    if (auto problems = validate_mdp(input, {.allow_negative_rewards = true}); !problems.empty()) {
        throw PreconditionViolated("invalid model: " + problems.front());
    }
    const std::vector<char> in_f0 = members(input.size(), input.f_set);
    const std::vector<char> in_g0 = members(input.size(), input.g_set);
    if (in_f0[input.init] || in_g0[input.init]) {
        throw PreconditionViolated("initial state '" + input.names[input.init] + "' lies in F or G");
    }

    // Step 1: drop unreachable states.
    std::vector<int> kept;
    Mdp m = restrict_to_reachable(input, &kept);
    m.goal.reset();
    m.fail.reset();
    std::vector<int> back(m.size());
    for (int s = 0; s < static_cast<int>(kept.size()); ++s) {
        if (kept[s] >= 0) {
            back[kept[s]] = s;
        }
    }
    const int n = m.size();
    const std::vector<char> in_f = members(n, m.f_set);
    const std::vector<char> in_g = members(n, m.g_set);

    // Step 2: product over modes.
    Work w;
    const int goal = 3 * n;
    const int fail = 3 * n + 1;
    std::set<std::string> used(m.names.begin(), m.names.end());
    auto unique_name = [&](std::string base) {
        std::string name = base;
        for (int k = 1; used.count(name); ++k) {
            name = base + "_" + std::to_string(k);
        }
        used.insert(name);
        return name;
    };
    const Mode modes[] = {Mode::normal, Mode::after_g, Mode::after_f};
    const char* suffix[] = {"", "~G", "~F"};
    for (int mode = 0; mode < 3; ++mode) {
        for (int s = 0; s < n; ++s) {
            w.m.add_state(mode == 0 ? m.names[s] : unique_name(m.names[s] + suffix[mode]));
            w.origin.push_back({back[s], modes[mode]});
        }
    }
    w.m.add_state(unique_name("goal"));
    w.origin.push_back({-1, Mode::goal});
    w.m.add_state(unique_name("fail"));
    w.origin.push_back({-1, Mode::fail});
    w.m.init = m.init;
    w.m.goal = goal;
    w.m.fail = fail;
    w.m.f_set = {goal};
    w.m.g_set = {goal};

    auto copy = [&](int s, int src_mode, int dst_mode, bool keep_reward) {
        for (const auto& a : m.actions[s]) {
            Action b;
            b.label = a.label;
            b.reward = keep_reward ? a.reward : Rational(0);
            for (const auto& t : a.dist) {
                b.dist.push_back({dst_mode * n + t.target, t.prob});
            }
            w.m.actions[src_mode * n + s].push_back(std::move(b));
        }
    };
    for (int s = 0; s < n; ++s) {
        if (in_f[s] && in_g[s]) {
            w.m.actions[s].push_back(jump(goal, 0));
        } else if (in_g[s]) {
            copy(s, 0, 1, true);
        } else if (in_f[s]) {
            copy(s, 0, 2, false);
        } else {
            copy(s, 0, 0, true);
        }
        if (in_f[s]) {
            w.m.actions[n + s].push_back(jump(goal, 0));
        } else {
            copy(s, 1, 1, true);
        }
        if (in_g[s]) {
            w.m.actions[2 * n + s].push_back(jump(goal, 0));
        } else {
            copy(s, 2, 2, false);
        }
    }

    // Cleanup: shortcuts where F or G is certain.
    const auto min_g = min_reach_prob(m, in_g);
    const auto min_f = min_reach_prob(m, in_f);
    std::vector<char> absorbing(n, 0);
    for (int s = 0; s < n; ++s) {
        absorbing[s] = in_f[s] || min_f.values[s] < 1;
    }
    const auto exp_f = max_total_exp(m, absorbing);
    for (int s = 0; s < n; ++s) {
        if (!in_g[s] && min_g.values[s] == 1) {
            w.m.actions[2 * n + s] = {jump(goal, 0)};
        }
        if (!in_f[s] && min_f.values[s] == 1) {
            w.m.actions[n + s] = {jump(goal, exp_f.values[s])};
        }
    }
    std::vector<char> shortcut(w.m.size(), 0);
    for (int s = 0; s < w.m.size(); ++s) {
        const auto& acts = w.m.actions[s];
        shortcut[s] = acts.size() == 1 && acts[0].reward == 0 && acts[0].dist.size() == 1 &&
                      acts[0].dist[0].target == goal;
    }
    if (shortcut[w.m.init]) {
        // Init moves to goal with reward 0 under every scheduler.
        shortcut[w.m.init] = 0;
    }
    redirect(w.m, shortcut, goal);
    prune(w);

    auto afterg = [&](int s) { return w.origin[s].mode == Mode::after_g; };

    // Step 3: afterG states that may miss F, and pairs leading to them.
    {
        const int k = w.m.size();
        auto reach = max_reach_prob(w.m, mask_of(k, {*w.m.goal}));
        std::vector<char> bad(k, 0);
        for (int s = 0; s < k; ++s) {
            bad[s] = afterg(s) && reach.values[s] < 1;
        }
        for (bool changed = true; changed;) {
            changed = false;
            for (int s = 0; s < k; ++s) {
                if (bad[s]) {
                    continue;
                }
                auto& acts = w.m.actions[s];
                const bool had = !acts.empty();
                auto removed = std::remove_if(acts.begin(), acts.end(), [&](const Action& a) {
                    return std::any_of(a.dist.begin(), a.dist.end(), [&](const Transition& t) { return bad[t.target] != 0; });
                });
                if (removed != acts.end()) {
                    acts.erase(removed, acts.end());
                    changed = true;
                }
                if (had && acts.empty()) {
                    bad[s] = 1;
                    changed = true;
                }
            }
        }
        if (bad[w.m.init]) {
            throw PreconditionViolated("no scheduler reaches G and then F almost surely");
        }
        for (int s = 0; s < k; ++s) {
            if (bad[s]) {
                w.m.actions[s].clear();
            }
        }
        prune(w);
    }
    {
        const int k = w.m.size();
        auto reach = max_reach_prob(w.m, mask_of(k, {*w.m.goal}));
        std::vector<char> hopeless(k, 0);
        for (int s = 0; s < k; ++s) {
            hopeless[s] = reach.values[s] == 0 && s != *w.m.fail;
        }
        if (hopeless[w.m.init]) {
            throw PreconditionViolated("G with F certain afterwards is unreachable from the initial state");
        }
        redirect(w.m, hopeless, *w.m.fail);
        prune(w);
    }
    {
        const int k = w.m.size();
        std::vector<char> target(k, 0);
        target[*w.m.goal] = 1;
        for (int s = 0; s < k; ++s) {
            target[s] = target[s] || afterg(s);
        }
        auto low = min_reach_prob(w.m, target);
        for (int s = 0; s < k; ++s) {
            if (!target[s] && !w.m.is_trap(s) && low.values[s] == 0) {
                auto& acts = w.m.actions[s];
                acts.push_back(jump(*w.m.fail, 0, "iota"));
                acts.back().label = fresh_label(std::vector<Action>(acts.begin(), acts.end() - 1), "iota");
            }
        }
    }
    return {std::move(w.m), std::move(w.origin)};
}

bool check_precondition(const Mdp& m) {
    const auto in_f = members(m.size(), m.f_set);
    const auto in_g = members(m.size(), m.g_set);
    if (in_f[m.init] || in_g[m.init]) {
        throw PreconditionViolated("initial state '" + m.names[m.init] + "' lies in F or G");
    }
    try {
        normal_form(m);
    } catch (const PreconditionViolated&) {
        return false;
    }
    return true;
}

Mdp mec_quotient(const Mdp& m, std::vector<int>* class_of) {
    const int n = m.size();
    auto ecs = max_end_components(m);
    std::vector<int> rep(n);
    for (int s = 0; s < n; ++s) {
        rep[s] = s;
    }
    std::vector<std::vector<char>> internal(n);
    for (int s = 0; s < n; ++s) {
        internal[s].assign(m.actions[s].size(), 0);
    }
    for (const auto& ec : ecs) {
        for (std::size_t i = 0; i < ec.states.size(); ++i) {
            int s = ec.states[i];
            rep[s] = ec.states.front();
            for (int a : ec.actions[i]) {
                if (m.actions[s][a].reward != 0) {
                    throw PositiveEcPresent("end component through '" + m.names[s] + "' action '" +
                                            m.actions[s][a].label + "' has positive reward");
                }
                internal[s][a] = 1;
            }
        }
    }
    std::vector<int> index(n, -1);
    Mdp out;
    std::vector<std::vector<int>> group(n);
    for (int s = 0; s < n; ++s) {
        group[rep[s]].push_back(s);
    }
    for (int s = 0; s < n; ++s) {
        if (rep[s] != s) {
            continue;
        }
        std::string name;
        for (int u : group[s]) {
            name += (name.empty() ? "" : "+") + m.names[u];
        }
        index[s] = out.add_state(name);
    }
    for (int s = 0; s < n; ++s) {
        index[s] = index[rep[s]];
    }
    for (int s = 0; s < n; ++s) {
        if (rep[s] != s) {
            continue;
        }
        auto& acts = out.actions[index[s]];
        for (int u : group[s]) {
            for (std::size_t a = 0; a < m.actions[u].size(); ++a) {
                if (internal[u][a]) {
                    continue;
                }
                Action b = m.actions[u][a];
                if (group[s].size() > 1) {
                    b.label = m.names[u] + "." + b.label;
                }
                for (auto& t : b.dist) {
                    t.target = index[t.target];
                }
                acts.push_back(std::move(b));
            }
        }
    }
    normalize_distributions(out);
    out.init = index[m.init];
    auto map_set = [&](const std::vector<int>& in) {
        std::set<int> seen;
        for (int s : in) {
            seen.insert(index[s]);
        }
        return std::vector<int>(seen.begin(), seen.end());
    };
    out.f_set = map_set(m.f_set);
    out.g_set = map_set(m.g_set);
    if (m.goal) {
        out.goal = index[*m.goal];
    }
    if (m.fail) {
        out.fail = index[*m.fail];
    }
    if (class_of) {
        *class_of = std::move(index);
    }
    return out;
}

std::vector<std::string> canonical_violations(const Mdp& m) {
    std::vector<std::string> out;
    if (!m.goal || !m.fail) {
        out.push_back("goal and fail must be designated");
        return out;
    }
    for (int s = 0; s < m.size(); ++s) {
        if (m.is_trap(s) && s != *m.goal && s != *m.fail) {
            out.push_back("state '" + m.names[s] + "': trap other than goal and fail");
        }
    }
    auto reach = max_reach_prob(m, mask_of(m.size(), {*m.goal}));
    for (int s = 0; s < m.size(); ++s) {
        if (s != *m.fail && reach.values[s] == 0) {
            out.push_back("state '" + m.names[s] + "': cannot reach goal");
        }
    }
    for (const auto& ec : max_end_components(m)) {
        out.push_back("state '" + m.names[ec.states.front()] + "': lies in an end component");
    }
    return out;
}

}  // namespace cemax
