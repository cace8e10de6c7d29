#include "cemax/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "cemax/errors.hpp"
#include "cemax/reach.hpp"

namespace cemax {

SchedulerSpace scheduler_space(const Mdp& m, const Saturation& sat) {
    SchedulerSpace space;
    space.saturation = sat.point;
    std::set<std::pair<int, Level>> seen{{m.init, 0}};
    std::deque<std::pair<int, Level>> queue{{m.init, 0}};
    while (!queue.empty()) {
        auto [s, l] = queue.front();
        queue.pop_front();
        if (m.is_trap(s) || l >= sat.point) {
            continue;
        }
        space.pairs.emplace_back(s, l);
        space.size *= static_cast<double>(m.actions[s].size());
        for (const auto& a : m.actions[s]) {
            const Level next = std::min(sat.point, l + integer_reward(a));
            for (const auto& t : a.dist) {
                if (seen.emplace(t.target, next).second) {
                    queue.emplace_back(t.target, next);
                }
            }
        }
    }
    std::sort(space.pairs.begin(), space.pairs.end());
    return space;
}

namespace {

class Search {
public:
    Search(const Mdp& m, const Saturation& sat, const SchedulerSpace& space) : m_(m), top_(sat.point) {
        y_.assign(top_ + 1, std::vector<Rational>(m.size()));
        theta_.assign(top_ + 1, std::vector<Rational>(m.size()));
        y_[top_] = sat.y;
        theta_[top_] = sat.theta;
        members_.resize(top_);
        for (const auto& [s, l] : space.pairs) {
            members_[l].push_back(s);
        }
        choice_.resize(top_);
        for (Level l = 0; l < top_; ++l) {
            choice_[l].assign(m.size(), 0);
        }
    }

    void run() { level(top_ - 1); }

    bool found() const { return found_; }
    const Rational& best() const { return best_; }
    const std::vector<std::vector<int>>& best_choice() const { return best_choice_; }
    double explored() const { return explored_; }

private:
    void level(Level r) {
        if (r < 0) {
            ++explored_;
            const Rational& y = y_[0][m_.init];
            if (y > 0) {
                Rational v = theta_[0][m_.init] / y;
                if (!found_ || v > best_) {
                    found_ = true;
                    best_ = v;
                    best_choice_ = choice_;
                }
            }
            return;
        }
        const auto& states = members_[r];
        std::vector<int> free;
        for (int s : states) {
            choice_[r][s] = 0;
            if (m_.actions[s].size() > 1) {
                free.push_back(s);
            }
        }
        while (true) {
            solve_level(r);
            level(r - 1);
            std::size_t i = 0;
            for (; i < free.size(); ++i) {
                int s = free[i];
                if (++choice_[r][s] < static_cast<int>(m_.actions[s].size())) {
                    break;
                }
                choice_[r][s] = 0;
            }
            if (i == free.size()) {
                return;
            }
        }
    }

    void solve_level(Level r) {
        const int n = m_.size();
        std::vector<SparseRow> p(n);
        std::vector<Rational> by(n);
        std::vector<Rational> bt(n);
        by[*m_.goal] = 1;
        for (int s : members_[r]) {
            const Action& a = m_.actions[s][choice_[r][s]];
            const Level step = integer_reward(a);
            if (step == 0) {
                for (const auto& t : a.dist) {
                    p[s].emplace_back(t.target, t.prob);
                }
                continue;
            }
            const Level row = std::min(top_, r + step);
            Rational ya = 0;
            Rational ta = 0;
            for (const auto& t : a.dist) {
                ya += t.prob * y_[row][t.target];
                ta += t.prob * theta_[row][t.target];
            }
            by[s] = ya;
            bt[s] = a.reward * ya + ta;
        }
        y_[r] = solve_chain(p, by);
        theta_[r] = solve_chain(p, bt);
    }

    const Mdp& m_;
    Level top_;
    std::vector<std::vector<Rational>> y_;
    std::vector<std::vector<Rational>> theta_;
    std::vector<std::vector<int>> members_;
    std::vector<std::vector<int>> choice_;
    bool found_ = false;
    Rational best_;
    std::vector<std::vector<int>> best_choice_;
    double explored_ = 0;
};

}  // namespace

OracleResult brute_force_max(const Mdp& m, const Saturation& sat, double cap) {
    if (!m.goal || !m.fail) {
        throw PreconditionViolated("oracle needs designated goal and fail states");
    }
    SchedulerSpace space = scheduler_space(m, sat);
    if (space.size > cap) {
        throw SpaceTooLarge(space.size);
    }
    OracleResult out;
    if (sat.point == 0) {
        out.value = sat.value(m.init);
        out.scheduler = memoryless(m, sat.choice);
        out.explored = 1;
        return out;
    }
    Search search(m, sat, space);
    search.run();
    if (!search.found()) {
        throw InternalError("no scheduler in the space reaches goal");
    }
    RewardBasedScheduler full;
    full.saturation = sat.point;
    full.tail = sat.choice;
    for (const auto& [s, l] : space.pairs) {
        full.table[{s, l}] = search.best_choice()[l][s];
    }
    out.scheduler.saturation = sat.point;
    out.scheduler.tail = sat.choice;
    for (const auto& key : reachable_pairs(m, full)) {
        out.scheduler.table[key] = full.table.at(key);
    }
    out.value = search.best();
    out.explored = search.explored();
    return out;
}

}  // namespace cemax
