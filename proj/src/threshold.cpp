#include "cemax/threshold.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "cemax/errors.hpp"
#include "cemax/graph.hpp"

namespace cemax {

namespace {

Level row_for(const ValueTables& t, Level r, const Action& a) {
    return std::min(t.saturation, r + integer_reward(a));
}

void require_canonical(const Mdp& m) {
    if (!m.goal || !m.fail) {
        throw PreconditionViolated("threshold algorithm needs designated goal and fail states");
    }
}

void set_traps(const Mdp& m, ValueTables& t, Level r) {
    t.y[r][*m.goal] = 1;
    t.theta[r][*m.goal] = 0;
    t.y[r][*m.fail] = 0;
    t.theta[r][*m.fail] = 0;
}

// Lowest-index action of Act* whose successors keep the maximal goal probability in M*.
void fill_level_lp(const Mdp& m, ValueTables& t, Level r, const Rational& threshold) {
    const int n = m.size();
    const int goal = *m.goal;
    const int fail = *m.fail;
    LevelSolution ls = level_values(m, t, r, threshold);
    Mdp star = m;
    std::vector<std::vector<std::pair<Rational, Rational>>> direct(n);
    for (int s = 0; s < n; ++s) {
        direct[s].resize(m.actions[s].size());
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            const Action& act = m.actions[s][a];
            if (act.reward == 0 || !ls.act_star[s][a]) {
                continue;
            }
            direct[s][a] = pair_values(m, t, s, static_cast<int>(a), r);
            const Rational& ya = direct[s][a].first;
            auto& dist = star.actions[s][a].dist;
            dist.clear();
            if (ya > 0) {
                dist.push_back({goal, ya});
            }
            if (ya < 1) {
                dist.push_back({fail, 1 - ya});
            }
        }
    }
    auto reach = max_reach_prob(star, mask_of(n, {goal}), ls.act_star);
    std::vector<int> choice(n, -1);
    for (int s = 0; s < n; ++s) {
        if (m.is_trap(s)) {
            continue;
        }
        for (std::size_t a = 0; a < star.actions[s].size() && choice[s] < 0; ++a) {
            if (!ls.act_star[s][a]) {
                continue;
            }
            Rational e = 0;
            for (const auto& tr : star.actions[s][a].dist) {
                e += tr.prob * reach.values[tr.target];
            }
            if (e == reach.values[s]) {
                choice[s] = static_cast<int>(a);
            }
        }
        if (choice[s] < 0) {
            throw InternalError("no value-consistent optimal action at state '" + m.names[s] + "'");
        }
    }
    std::vector<SparseRow> p(n);
    std::vector<Rational> b(n);
    for (int s = 0; s < n; ++s) {
        t.action[r][s] = choice[s];
        t.y[r][s] = reach.values[s];
        if (choice[s] < 0) {
            continue;
        }
        const Action& act = m.actions[s][choice[s]];
        if (act.reward != 0) {
            b[s] = direct[s][choice[s]].second;
        } else {
            for (const auto& tr : act.dist) {
                p[s].emplace_back(tr.target, tr.prob);
            }
        }
    }
    auto theta = solve_chain(p, b);
    for (int s = 0; s < n; ++s) {
        t.theta[r][s] = theta[s];
    }
    set_traps(m, t, r);
    const Rational shift = threshold - r;
    for (int s = 0; s < n; ++s) {
        if (t.theta[r][s] - shift * t.y[r][s] != ls.x[s]) {
            throw InternalError("level table disagrees with the linear-program optimum at state '" + m.names[s] + "'");
        }
    }
}

// Zero-reward successors precede their sources in `order`.
void fill_level_sweep(const Mdp& m, ValueTables& t, Level r, const Rational& threshold, const std::vector<int>& order) {
    const Rational shift = threshold - r;
    set_traps(m, t, r);
    for (int s : order) {
        if (m.is_trap(s)) {
            continue;
        }
        int best = -1;
        Rational best_delta;
        Rational best_y;
        Rational best_theta;
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            auto [ya, ta] = pair_values(m, t, s, static_cast<int>(a), r);
            Rational delta = ta - shift * ya;
            if (best < 0 || delta > best_delta || (delta == best_delta && ya > best_y)) {
                best = static_cast<int>(a);
                best_delta = delta;
                best_y = ya;
                best_theta = ta;
            }
        }
        t.action[r][s] = best;
        t.y[r][s] = best_y;
        t.theta[r][s] = best_theta;
    }
}

std::int64_t count_violations(const Mdp& m, const ValueTables& t, Level r, const Rational& threshold) {
    const Rational shift = threshold - r;
    std::int64_t bad = 0;
    for (int s = 0; s < m.size(); ++s) {
        const Rational own = t.theta[r][s] - shift * t.y[r][s];
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            auto [ya, ta] = pair_values(m, t, s, static_cast<int>(a), r);
            if (ta - shift * ya > own) {
                ++bad;
            }
        }
    }
    return bad;
}

bool is_acyclic(const Mdp& m) {
    std::vector<std::vector<int>> adj(m.size());
    for (int s = 0; s < m.size(); ++s) {
        for (const auto& a : m.actions[s]) {
            for (const auto& tr : a.dist) {
                if (tr.target == s) {
                    return false;
                }
                adj[s].push_back(tr.target);
            }
        }
    }
    int count = 0;
    scc_ids(adj, &count);
    return count == m.size();
}

}  // namespace

std::pair<Rational, Rational> pair_values(const Mdp& m, const ValueTables& t, int s, int a, Level r) {
    const Action& act = m.actions[s][a];
    const Level row = row_for(t, r, act);
    return action_values(act, t.y[row], t.theta[row]);
}

LevelSolution level_values(const Mdp& m, const ValueTables& t, Level r, const Rational& threshold) {
    require_canonical(m);
    const int n = m.size();
    const int final_state = n;
    const Rational shift = threshold - r;
    Mdp aux;
    aux.names = m.names;
    aux.names.push_back("final");
    aux.actions.resize(n + 1);
    aux.init = m.init;
    for (int s = 0; s < n; ++s) {
        if (s == *m.goal) {
            aux.actions[s].push_back(Action{"tau", -shift, {{final_state, Rational(1)}}});
            continue;
        }
        if (s == *m.fail) {
            aux.actions[s].push_back(Action{"tau", Rational(0), {{final_state, Rational(1)}}});
            continue;
        }
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            const Action& act = m.actions[s][a];
            if (act.reward == 0) {
                aux.actions[s].push_back(act);
                continue;
            }
            auto [ya, ta] = pair_values(m, t, s, static_cast<int>(a), r);
            aux.actions[s].push_back(Action{act.label, ta - shift * ya, {{final_state, Rational(1)}}});
        }
    }
    auto exp = max_total_exp(aux, mask_of(n + 1, {final_state}));
    LevelSolution out;
    out.x.assign(exp.values.begin(), exp.values.begin() + n);
    out.act_star.resize(n);
    for (int s = 0; s < n; ++s) {
        out.act_star[s].assign(m.actions[s].size(), 0);
        if (m.is_trap(s)) {
            continue;
        }
        bool any = false;
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            const Action& b = aux.actions[s][a];
            Rational q = b.reward;
            for (const auto& tr : b.dist) {
                q += tr.prob * exp.values[tr.target];
            }
            if (q == out.x[s]) {
                out.act_star[s][a] = 1;
                any = true;
            }
        }
        if (!any) {
            throw InternalError("empty optimal action set at state '" + m.names[s] + "'");
        }
    }
    return out;
}

RewardBasedScheduler scheduler_from_tables(const Mdp& m, const ValueTables& t) {
    RewardBasedScheduler sched;
    sched.saturation = t.saturation;
    sched.tail = t.action[t.saturation];
    std::map<std::pair<int, Level>, char> seen;
    std::deque<std::pair<int, Level>> queue;
    auto visit = [&](int s, Level l) {
        if (seen.emplace(std::make_pair(s, l), 1).second) {
            queue.emplace_back(s, l);
        }
    };
    visit(m.init, 0);
    while (!queue.empty()) {
        auto [s, l] = queue.front();
        queue.pop_front();
        if (m.is_trap(s)) {
            continue;
        }
        const int a = t.action[l][s];
        if (l < t.saturation) {
            sched.table[{s, l}] = a;
        }
        const Level next = row_for(t, l, m.actions[s][a]);
        for (const auto& tr : m.actions[s][a].dist) {
            visit(tr.target, next);
        }
    }
    return sched;
}

ThresholdAnswer threshold_solve(const Mdp& m, const Rational& threshold, const Saturation& sat,
                                const ThresholdOptions& options) {
    require_canonical(m);
    if (threshold < 0) {
        throw PreconditionViolated("threshold must be non-negative");
    }
    const int n = m.size();
    const Level top = sat.point;
    ThresholdAnswer ans;
    ValueTables& t = ans.tables;
    t.saturation = top;
    t.y.assign(top + 1, std::vector<Rational>(n));
    t.theta.assign(top + 1, std::vector<Rational>(n));
    t.action.assign(top + 1, std::vector<int>(n, -1));
    t.y[top] = sat.y;
    t.theta[top] = sat.theta;
    t.action[top] = sat.choice;
    Level start = top - 1;
    if (options.frozen) {
        if (options.frozen->saturation != top) {
            throw InternalError("frozen tables use a different saturation point");
        }
        for (Level r = std::max<Level>(options.frozen_level + 1, 0); r < top; ++r) {
            t.y[r] = options.frozen->y[r];
            t.theta[r] = options.frozen->theta[r];
            t.action[r] = options.frozen->action[r];
        }
        start = std::min(start, options.frozen_level);
    }
    TopoOrder topo;
    if (options.sweep) {
        topo = zero_reward_topo_order(m);
    }
    for (Level r = start; r >= 0; --r) {
        if (options.sweep && topo.ok()) {
            fill_level_sweep(m, t, r, threshold, topo.order);
        } else {
            fill_level_lp(m, t, r, threshold);
        }
        ans.violations += count_violations(m, t, r, threshold);
    }
    ans.prob = t.y[0][m.init];
    ans.partial = t.theta[0][m.init];
    if (ans.prob > 0) {
        ans.value = ans.partial / ans.prob;
    }
    ans.yes = ans.value && *ans.value >= threshold;
    ans.scheduler = scheduler_from_tables(m, t);
    return ans;
}

bool decide(const ThresholdAnswer& answer, const Rational& threshold, Relation rel) {
    switch (rel) {
        case Relation::ge:
            return answer.yes;
        case Relation::gt:
            return answer.yes && *answer.value > threshold;
        case Relation::lt:
            return !answer.yes;
        case Relation::le:
            return !answer.yes || *answer.value == threshold;
    }
    return false;
}

ThresholdAnswer threshold_acyclic(const Mdp& m, const Rational& threshold) {
    require_canonical(m);
    if (!is_acyclic(m)) {
        throw NotAcyclic("model has a cycle");
    }
    struct Entry {
        Rational y;
        Rational theta;
        int action = -1;
    };
    std::map<std::pair<int, Level>, Entry> memo;
    std::vector<std::pair<int, Level>> stack{{m.init, 0}};
    while (!stack.empty()) {
        auto [s, r] = stack.back();
        if (memo.count({s, r})) {
            stack.pop_back();
            continue;
        }
        if (m.is_trap(s)) {
            memo[{s, r}] = Entry{s == *m.goal ? Rational(1) : Rational(0), Rational(0), -1};
            stack.pop_back();
            continue;
        }
        bool ready = true;
        for (const auto& act : m.actions[s]) {
            const Level next = r + integer_reward(act);
            for (const auto& tr : act.dist) {
                if (!memo.count({tr.target, next})) {
                    stack.emplace_back(tr.target, next);
                    ready = false;
                }
            }
        }
        if (!ready) {
            continue;
        }
        stack.pop_back();
        const Rational shift = threshold - r;
        Entry best;
        Rational best_delta;
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            const Action& act = m.actions[s][a];
            const Level next = r + integer_reward(act);
            Rational ya = 0;
            Rational ta = 0;
            for (const auto& tr : act.dist) {
                const Entry& e = memo.at({tr.target, next});
                ya += tr.prob * e.y;
                ta += tr.prob * e.theta;
            }
            ta += act.reward * ya;
            Rational delta = ta - shift * ya;
            if (best.action < 0 || delta > best_delta || (delta == best_delta && ya > best.y)) {
                best = Entry{ya, ta, static_cast<int>(a)};
                best_delta = delta;
            }
        }
        memo[{s, r}] = std::move(best);
    }
    ThresholdAnswer ans;
    const Entry& root = memo.at({m.init, 0});
    ans.prob = root.y;
    ans.partial = root.theta;
    if (ans.prob > 0) {
        ans.value = ans.partial / ans.prob;
    }
    ans.yes = ans.value && *ans.value >= threshold;
    RewardBasedScheduler& sched = ans.scheduler;
    std::deque<std::pair<int, Level>> queue{{m.init, 0}};
    std::map<std::pair<int, Level>, char> seen{{{m.init, 0}, 1}};
    Level highest = 0;
    while (!queue.empty()) {
        auto [s, r] = queue.front();
        queue.pop_front();
        if (m.is_trap(s)) {
            continue;
        }
        const int a = memo.at({s, r}).action;
        sched.table[{s, r}] = a;
        highest = std::max(highest, r);
        const Level next = r + integer_reward(m.actions[s][a]);
        for (const auto& tr : m.actions[s][a].dist) {
            if (seen.emplace(std::make_pair(tr.target, next), 1).second) {
                queue.emplace_back(tr.target, next);
            }
        }
    }
    sched.saturation = highest + 1;
    sched.tail.assign(m.size(), -1);
    return ans;
}

}  // namespace cemax
