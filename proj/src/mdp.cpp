#include "cemax/mdp.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace cemax {

int Mdp::add_state(std::string name) {
    names.push_back(std::move(name));
    actions.emplace_back();
    return size() - 1;
}

int Mdp::find(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

std::vector<std::string> validate_mdp(const Mdp& m, ValidationOptions options) {
    std::vector<std::string> out;
    const int n = m.size();
    if (static_cast<int>(m.actions.size()) != n) {
        out.push_back("action table size differs from state count");
        return out;
    }
    std::set<std::string> seen;
    for (const auto& name : m.names) {
        if (name.empty()) {
            out.push_back("empty state name");
        } else if (!seen.insert(name).second) {
            out.push_back("duplicate state name '" + name + "'");
        }
    }
    if (m.init < 0 || m.init >= n) {
        out.push_back("initial state index out of range");
    }
    for (int s : m.f_set) {
        if (s < 0 || s >= n) {
            out.push_back("F contains an out-of-range state");
        }
    }
    for (int s : m.g_set) {
        if (s < 0 || s >= n) {
            out.push_back("G contains an out-of-range state");
        }
    }
    for (auto trap : {m.goal, m.fail}) {
        if (trap && (*trap < 0 || *trap >= n || !m.actions[*trap].empty())) {
            out.push_back("designated goal/fail is not a trap state");
        }
    }
    for (int s = 0; s < n; ++s) {
        std::set<std::string> labels;
        for (const auto& a : m.actions[s]) {
            const std::string where = "state '" + m.names[s] + "' action '" + a.label + "'";
            if (!labels.insert(a.label).second) {
                out.push_back(where + ": duplicate action label");
            }
            if (a.reward < 0 && !options.allow_negative_rewards) {
                out.push_back(where + ": negative reward");
            }
            if (a.dist.empty()) {
                out.push_back(where + ": empty distribution");
                continue;
            }
            Rational sum = 0;
            for (const auto& t : a.dist) {
                if (t.target < 0 || t.target >= n) {
                    out.push_back(where + ": target out of range");
                }
                if (t.prob <= 0 || t.prob > 1) {
                    out.push_back(where + ": probability outside (0,1]");
                }
                sum += t.prob;
            }
            if (sum != 1) {
                out.push_back(where + ": distribution sum " + to_string(sum) + " != 1");
            }
        }
    }
    return out;
}

void normalize_distributions(Mdp& m) {
    for (auto& acts : m.actions) {
        for (auto& a : acts) {
            std::sort(a.dist.begin(), a.dist.end(),
                      [](const Transition& x, const Transition& y) { return x.target < y.target; });
            std::vector<Transition> merged;
            for (auto& t : a.dist) {
                if (!merged.empty() && merged.back().target == t.target) {
                    merged.back().prob += t.prob;
                } else {
                    merged.push_back(t);
                }
            }
            a.dist = std::move(merged);
        }
    }
}

int max_actions(const Mdp& m) {
    std::size_t k = 0;
    for (const auto& acts : m.actions) {
        k = std::max(k, acts.size());
    }
    return static_cast<int>(k);
}

int pair_count(const Mdp& m) {
    std::size_t k = 0;
    for (const auto& acts : m.actions) {
        k += acts.size();
    }
    return static_cast<int>(k);
}

Mdp restrict_to_reachable(const Mdp& m, std::vector<int>* old_to_new) {
    const int n = m.size();
    std::vector<char> keep(n, 0);
    std::deque<int> queue{m.init};
    keep[m.init] = 1;
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (const auto& a : m.actions[s]) {
            for (const auto& t : a.dist) {
                if (!keep[t.target]) {
                    keep[t.target] = 1;
                    queue.push_back(t.target);
                }
            }
        }
    }
    if (m.goal) {
        keep[*m.goal] = 1;
    }
    if (m.fail) {
        keep[*m.fail] = 1;
    }
    std::vector<int> map(n, -1);
    Mdp out;
    for (int s = 0; s < n; ++s) {
        if (keep[s]) {
            map[s] = out.add_state(m.names[s]);
        }
    }
    for (int s = 0; s < n; ++s) {
        if (!keep[s]) {
            continue;
        }
        auto& acts = out.actions[map[s]];
        acts = m.actions[s];
        for (auto& a : acts) {
            for (auto& t : a.dist) {
                t.target = map[t.target];
            }
        }
    }
    out.init = map[m.init];
    for (int s : m.f_set) {
        if (map[s] >= 0) {
            out.f_set.push_back(map[s]);
        }
    }
    for (int s : m.g_set) {
        if (map[s] >= 0) {
            out.g_set.push_back(map[s]);
        }
    }
    if (m.goal) {
        out.goal = map[*m.goal];
    }
    if (m.fail) {
        out.fail = map[*m.fail];
    }
    if (old_to_new) {
        *old_to_new = std::move(map);
    }
    return out;
}

}  // namespace cemax
