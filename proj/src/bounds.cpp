#include "cemax/bounds.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "cemax/errors.hpp"
#include "cemax/preprocess.hpp"
#include "cemax/reach.hpp"

namespace cemax {

Level counter_limit(const Mdp& m) {
    Level total = 0;
    for (int s = 0; s < m.size(); ++s) {
        Level best = 0;
        for (const auto& a : m.actions[s]) {
            best = std::max(best, integer_reward(a));
        }
        total += best;
    }
    return total;
}

Mdp reward_counter_product(const Mdp& m, bool reset) {
    if (!m.goal || !m.fail) {
        throw PreconditionViolated("counter product needs designated goal and fail states");
    }
    const Level limit = counter_limit(m);
    const int goal = *m.goal;
    const int fail = *m.fail;
    Mdp out;
    // Keys: (s, r) for the counter mode, (s, -1) for the copy.
    std::map<std::pair<int, Level>, int> index;
    std::deque<std::pair<int, Level>> queue;
    auto node = [&](int s, Level r) {
        auto [it, fresh] = index.emplace(std::make_pair(s, r), out.size());
        if (fresh) {
            out.add_state(r < 0 ? m.names[s] : "<" + m.names[s] + "," + std::to_string(r) + ">");
            queue.emplace_back(s, r);
        }
        return it->second;
    };
    out.init = node(m.init, 0);
    const int copy_goal = node(goal, -1);
    out.goal = copy_goal;
    out.f_set = {copy_goal};
    out.g_set = {copy_goal};
    while (!queue.empty()) {
        auto [s, r] = queue.front();
        queue.pop_front();
        const int here = index.at({s, r});
        std::vector<Action> acts;
        if (s == goal) {
            if (r >= 0) {
                Action tau{"tau", Rational(r), {{copy_goal, Rational(1)}}};
                acts.push_back(std::move(tau));
            }
        } else if (s == fail) {
            if (reset) {
                Action back{"reset", Rational(0), {{out.init, Rational(1)}}};
                acts.push_back(std::move(back));
            }
        } else {
            for (const auto& a : m.actions[s]) {
                Action b;
                b.label = a.label;
                Level next = r + integer_reward(a);
                if (r < 0) {
                    b.reward = a.reward;
                } else if (next <= limit) {
                    b.reward = 0;
                } else {
                    b.reward = next;
                }
                for (const auto& t : a.dist) {
                    b.dist.push_back({node(t.target, r >= 0 && next <= limit ? next : -1), t.prob});
                }
                acts.push_back(std::move(b));
            }
        }
        out.actions[here] = std::move(acts);
    }
    normalize_distributions(out);
    return out;
}

Rational upper_bound(const Mdp& m) {
    if (!m.goal || !m.fail) {
        throw PreconditionViolated("upper bound needs designated goal and fail states");
    }
    const int n = m.size();
    auto low = min_reach_prob(m, mask_of(n, {*m.goal}));
    bool direct = true;
    for (int s = 0; s < n; ++s) {
        direct = direct && (s == *m.fail || low.values[s] > 0);
    }
    Mdp reset;
    if (direct) {
        reset = m;
        reset.actions[*m.fail] = {Action{"reset", Rational(0), {{m.init, Rational(1)}}}};
        reset.fail.reset();
    } else {
        reset = reward_counter_product(m, true);
    }
    std::vector<int> class_of;
    Mdp quotient = mec_quotient(reset, &class_of);
    auto exp = max_total_exp(quotient, mask_of(quotient.size(), {*quotient.goal}));
    return exp.values[quotient.init];
}

}  // namespace cemax
