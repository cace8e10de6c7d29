#include "cemax/scheduler.hpp"

#include <algorithm>
#include <deque>

#include "cemax/errors.hpp"
#include "cemax/reach.hpp"

namespace cemax {

int RewardBasedScheduler::decide(int state, Level level) const {
    if (level >= saturation) {
        if (state < 0 || state >= static_cast<int>(tail.size()) || tail[state] < 0) {
            throw SchedulerIncomplete("no tail decision for state " + std::to_string(state));
        }
        return tail[state];
    }
    auto it = table.find({state, level});
    if (it == table.end()) {
        throw SchedulerIncomplete("no decision for state " + std::to_string(state) + " at level " +
                                  std::to_string(level));
    }
    return it->second;
}

Level integer_reward(const Action& a) {
    if (!is_integer(a.reward)) {
        throw PreconditionViolated("non-integer reward " + to_string(a.reward) + " on action '" + a.label + "'");
    }
    return to_int64(a.reward.get_num());
}

RewardBasedScheduler memoryless(const Mdp& m, std::vector<int> choice) {
    RewardBasedScheduler s;
    s.saturation = 0;
    s.tail = std::move(choice);
    s.tail.resize(m.size(), -1);
    return s;
}

namespace {

struct PairChain {
    std::vector<std::pair<int, Level>> pairs;
    std::map<std::pair<int, Level>, int> index;
};

Level cap(Level level, Level saturation) { return std::min(level, saturation); }

PairChain explore(const Mdp& m, const RewardBasedScheduler& sched) {
    PairChain chain;
    auto visit = [&](int s, Level l, std::deque<int>& queue) {
        auto key = std::make_pair(s, cap(l, sched.saturation));
        if (chain.index.emplace(key, static_cast<int>(chain.pairs.size())).second) {
            chain.pairs.push_back(key);
            queue.push_back(static_cast<int>(chain.pairs.size()) - 1);
        }
    };
    std::deque<int> queue;
    visit(m.init, 0, queue);
    while (!queue.empty()) {
        auto [s, l] = chain.pairs[queue.front()];
        queue.pop_front();
        if (m.is_trap(s)) {
            continue;
        }
        const auto& act = m.actions[s][sched.decide(s, l)];
        Level next = l + integer_reward(act);
        for (const auto& t : act.dist) {
            visit(t.target, next, queue);
        }
    }
    return chain;
}

}  // namespace

std::vector<std::pair<int, Level>> reachable_pairs(const Mdp& m, const RewardBasedScheduler& sched) {
    std::vector<std::pair<int, Level>> out;
    for (const auto& p : explore(m, sched).pairs) {
        if (p.second < sched.saturation && !m.is_trap(p.first)) {
            out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

SchedulerValue evaluate_scheduler(const Mdp& m, const RewardBasedScheduler& sched) {
    if (!m.goal || !m.fail) {
        throw PreconditionViolated("evaluation needs designated goal and fail states");
    }
    PairChain chain = explore(m, sched);
    const int k = static_cast<int>(chain.pairs.size());
    std::vector<SparseRow> p(k);
    std::vector<Rational> b_y(k), rew(k);
    for (int i = 0; i < k; ++i) {
        auto [s, l] = chain.pairs[i];
        if (m.is_trap(s)) {
            b_y[i] = s == *m.goal ? 1 : 0;
            continue;
        }
        const auto& act = m.actions[s][sched.decide(s, l)];
        rew[i] = act.reward;
        Level next = l + integer_reward(act);
        for (const auto& t : act.dist) {
            p[i].emplace_back(chain.index.at({t.target, cap(next, sched.saturation)}), t.prob);
        }
    }
    auto y = solve_chain(p, b_y);
    std::vector<Rational> b_theta(k);
    for (int i = 0; i < k; ++i) {
        b_theta[i] = rew[i] * y[i];
    }
    auto theta = solve_chain(p, b_theta);
    SchedulerValue v;
    v.prob_goal = y[0];
    v.partial_exp = theta[0];
    if (v.prob_goal > 0) {
        v.cexp = v.partial_exp / v.prob_goal;
    }
    return v;
}

}  // namespace cemax
