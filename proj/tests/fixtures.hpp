#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cemax/mdp.hpp"
#include "cemax/rational.hpp"
#include "cemax/scheduler.hpp"

namespace fixtures {

using cemax::Action;
using cemax::Mdp;
using cemax::Rational;

inline Rational q(long num, long den = 1) {
    Rational v(num, den);
    v.canonicalize();
    return v;
}

inline void add_action(Mdp& m, int s, std::string label, Rational reward,
                       std::vector<std::pair<int, Rational>> dist) {
    Action a;
    a.label = std::move(label);
    a.reward = std::move(reward);
    for (auto& [t, p] : dist) {
        a.dist.push_back({t, p});
    }
    m.actions[s].push_back(std::move(a));
}

// States s0 s1 s2 goal fail; gamma at s1 pays r, beta at s2 pays 1 and loops or fails.
inline Mdp run(long r, const std::string& init = "s0", bool designate = true) {
    Mdp m;
    for (const char* n : {"s0", "s1", "s2", "goal", "fail"}) {
        m.add_state(n);
    }
    add_action(m, 0, "tau", 0, {{1, q(1, 2)}, {2, q(1, 2)}});
    add_action(m, 1, "gamma", r, {{3, 1}});
    add_action(m, 2, "alpha", 0, {{3, 1}});
    add_action(m, 2, "beta", 1, {{2, q(1, 2)}, {4, q(1, 2)}});
    m.init = m.find(init);
    m.f_set = {3};
    m.g_set = {3};
    if (designate) {
        m.goal = 3;
        m.fail = 4;
    }
    return m;
}

inline constexpr int kS0 = 0;
inline constexpr int kS1 = 1;
inline constexpr int kS2 = 2;
inline constexpr int kAlpha = 0;
inline constexpr int kBeta = 1;

// beta on the first n visits of s2, then alpha; levels count visits since beta pays 1.
inline cemax::RewardBasedScheduler run_sn(long n) {
    cemax::RewardBasedScheduler s;
    s.saturation = n + 1;
    s.tail = {0, 0, kAlpha, -1, -1};
    s.table[{kS0, 0}] = 0;
    s.table[{kS1, 0}] = 0;
    for (long l = 0; l <= n; ++l) {
        s.table[{kS2, l}] = l < n ? kBeta : kAlpha;
    }
    return s;
}

// Optimum value r + 2 / (2^(r+2) + 1).
inline Rational run_optimum(long r) {
    Rational p = 1;
    for (long i = 0; i < r + 2; ++i) {
        p *= 2;
    }
    return Rational(r) + Rational(2) / (p + 1);
}

// Value of S_n: r + (n - r) / (2^n + 1).
inline Rational run_sn_value(long r, long n) {
    Rational p = 1;
    for (long i = 0; i < n; ++i) {
        p *= 2;
    }
    return Rational(r) + Rational(n - r) / (p + 1);
}

// sinit -> s1 (reward 2) or s2 (reward 1) -> s; at s alpha wins 1/2, beta wins 1/3.
inline Mdp acy(bool designate = true) {
    Mdp m;
    for (const char* n : {"sinit", "s1", "s2", "s", "goal", "fail"}) {
        m.add_state(n);
    }
    add_action(m, 0, "gamma", 0, {{1, q(1, 2)}, {2, q(1, 2)}});
    add_action(m, 1, "gamma1", 2, {{3, 1}});
    add_action(m, 2, "gamma2", 1, {{3, 1}});
    add_action(m, 3, "alpha", 0, {{4, q(1, 2)}, {5, q(1, 2)}});
    add_action(m, 3, "beta", 0, {{4, q(1, 3)}, {5, q(2, 3)}});
    m.init = 0;
    m.f_set = {4};
    m.g_set = {4};
    if (designate) {
        m.goal = 4;
        m.fail = 5;
    }
    return m;
}

struct RandomSpec {
    int min_states = 3;
    int max_states = 6;
    int max_actions = 3;
    int max_reward = 3;
    int max_den = 4;
    bool acyclic = false;
    // Probability (in percent) of drawing separate F and G sets instead of F = G = {goal}.
    int split_percent = 30;
};

// Random model; the last two states are traps named goal and fail, init is state 0.
inline Mdp random_mdp(std::uint64_t seed, const RandomSpec& spec = {}) {
    std::mt19937_64 rng(seed);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const int n = pick(spec.min_states, spec.max_states);
    Mdp m;
    for (int s = 0; s < n - 2; ++s) {
        m.add_state("s" + std::to_string(s));
    }
    const int goal = m.add_state("goal");
    const int fail = m.add_state("fail");
    for (int s = 0; s < n - 2; ++s) {
        const int acts = pick(1, spec.max_actions);
        for (int a = 0; a < acts; ++a) {
            const int den = pick(1, spec.max_den);
            const int parts = pick(1, std::min(den, 3));
            std::vector<int> weights(parts, 1);
            for (int left = den - parts; left > 0; --left) {
                ++weights[pick(0, parts - 1)];
            }
            std::vector<std::pair<int, Rational>> dist;
            for (int w : weights) {
                int t = spec.acyclic ? pick(s + 1, n - 1) : pick(0, n - 1);
                if (!spec.acyclic && t == 0 && pick(0, 1) == 0) {
                    t = goal;
                }
                dist.emplace_back(t, q(w, den));
            }
            add_action(m, s, "a" + std::to_string(a), pick(0, spec.max_reward), dist);
        }
    }
    m.init = 0;
    if (pick(0, 99) < spec.split_percent && n > 3) {
        std::set<int> f{goal};
        std::set<int> g;
        for (int s = 1; s < n - 2; ++s) {
            const int roll = pick(0, 5);
            if (roll == 0) {
                f.insert(s);
            } else if (roll == 1) {
                g.insert(s);
            }
        }
        g.insert(pick(0, 1) ? goal : pick(1, n - 2));
        m.f_set.assign(f.begin(), f.end());
        m.g_set.assign(g.begin(), g.end());
    } else {
        m.f_set = {goal};
        m.g_set = {goal};
    }
    cemax::normalize_distributions(m);
    (void)fail;
    return m;
}

// Maximal conditional expectation by enumerating every deterministic history-dependent scheduler
// of an acyclic model. Returns false when no scheduler reaches G with F certain afterwards.
// Each outcome is (Pr(G), Pr(G and F), E[reward until F, on G-paths]).
struct TreeOutcome {
    Rational pg;
    Rational pgf;
    Rational e;
    bool operator<(const TreeOutcome& o) const {
        if (pg != o.pg) {
            return pg < o.pg;
        }
        if (pgf != o.pgf) {
            return pgf < o.pgf;
        }
        return e < o.e;
    }
};

inline std::set<TreeOutcome> tree_outcomes(const Mdp& m, const std::vector<char>& in_f, const std::vector<char>& in_g,
                                           int s, bool seen_g, bool seen_f, const Rational& acc) {
    seen_g = seen_g || in_g[s];
    seen_f = seen_f || in_f[s];
    if (m.is_trap(s)) {
        TreeOutcome o;
        o.pg = seen_g ? 1 : 0;
        o.pgf = seen_g && seen_f ? 1 : 0;
        o.e = seen_g && seen_f ? acc : Rational(0);
        return {o};
    }
    std::set<TreeOutcome> all;
    for (const auto& a : m.actions[s]) {
        const Rational next = seen_f ? acc : acc + a.reward;
        std::set<TreeOutcome> combined{TreeOutcome{0, 0, 0}};
        for (const auto& t : a.dist) {
            auto sub = tree_outcomes(m, in_f, in_g, t.target, seen_g, seen_f, next);
            std::set<TreeOutcome> merged;
            for (const auto& c : combined) {
                for (const auto& o : sub) {
                    merged.insert({c.pg + t.prob * o.pg, c.pgf + t.prob * o.pgf, c.e + t.prob * o.e});
                }
            }
            combined = std::move(merged);
        }
        all.insert(combined.begin(), combined.end());
    }
    return all;
}

inline bool tree_max(const Mdp& m, Rational& best) {
    std::vector<char> in_f(m.size(), 0);
    std::vector<char> in_g(m.size(), 0);
    for (int s : m.f_set) {
        in_f[s] = 1;
    }
    for (int s : m.g_set) {
        in_g[s] = 1;
    }
    bool found = false;
    for (const auto& o : tree_outcomes(m, in_f, in_g, m.init, false, false, 0)) {
        if (o.pg > 0 && o.pgf == o.pg) {
            Rational v = o.e / o.pg;
            if (!found || v > best) {
                best = v;
                found = true;
            }
        }
    }
    return found;
}

// Minimum counterpart of tree_max.
inline bool tree_min(const Mdp& m, Rational& best) {
    Mdp neg = m;
    for (auto& acts : neg.actions) {
        for (auto& a : acts) {
            a.reward = -a.reward;
        }
    }
    if (!tree_max(neg, best)) {
        return false;
    }
    best = -best;
    return true;
}

}  // namespace fixtures
