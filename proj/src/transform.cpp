#include "cemax/transform.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "cemax/errors.hpp"
#include "cemax/preprocess.hpp"
#include "cemax/reach.hpp"
#include "cemax/threshold.hpp"

namespace cemax {

Scaled scale_rationals(const Mdp& m) {
    Scaled out;
    for (const auto& acts : m.actions) {
        for (const auto& a : acts) {
            mpz_lcm(out.factor.get_mpz_t(), out.factor.get_mpz_t(), a.reward.get_den_mpz_t());
        }
    }
    out.mdp = scale_rewards(m, Rational(out.factor));
    return out;
}

Mdp scale_rewards(const Mdp& m, const Rational& k) {
    Mdp out = m;
    for (auto& acts : out.actions) {
        for (auto& a : acts) {
            a.reward *= k;
        }
    }
    return out;
}

std::vector<Level> acyclic_heights(const Mdp& m) {
    const int n = m.size();
    std::vector<Level> h(n, 0);
    std::vector<char> color(n, 0);
    for (int root = 0; root < n; ++root) {
        if (color[root]) {
            continue;
        }
        // (state, next action index, next transition index)
        std::vector<std::tuple<int, std::size_t, std::size_t>> stack{{root, 0, 0}};
        color[root] = 1;
        while (!stack.empty()) {
            auto& [s, a, i] = stack.back();
            if (a == m.actions[s].size()) {
                for (const auto& act : m.actions[s]) {
                    for (const auto& t : act.dist) {
                        h[s] = std::max(h[s], h[t.target] + 1);
                    }
                }
                color[s] = 2;
                stack.pop_back();
                continue;
            }
            const auto& dist = m.actions[s][a].dist;
            if (i == dist.size()) {
                ++a;
                i = 0;
                continue;
            }
            const int t = dist[i++].target;
            if (color[t] == 1) {
                throw NotAcyclic("cycle through state '" + m.names[t] + "'");
            }
            if (color[t] == 0) {
                color[t] = 1;
                stack.emplace_back(t, 0, 0);
            }
        }
    }
    return h;
}

Layered layer_acyclic(const Mdp& m) {
    const auto h = acyclic_heights(m);
    for (int s : m.f_set) {
        if (!m.is_trap(s)) {
            throw PreconditionViolated("layering needs F to consist of traps; '" + m.names[s] + "' has actions");
        }
    }
    if (m.f_set != m.g_set) {
        throw PreconditionViolated("layering needs F = G");
    }
    Layered out;
    Mdp& l = out.mdp;
    l = m;
    std::set<std::string> used(m.names.begin(), m.names.end());
    for (int s = 0; s < m.size(); ++s) {
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            for (std::size_t i = 0; i < m.actions[s][a].dist.size(); ++i) {
                const int t = m.actions[s][a].dist[i].target;
                const Level gap = h[s] - 1 - h[t];
                int next = t;
                for (Level k = 0; k < gap; ++k) {
                    std::string base = m.names[s] + "@" + m.actions[s][a].label + "@" + m.names[t] + "@" +
                                       std::to_string(k + 1);
                    std::string name = base;
                    for (int j = 1; used.count(name); ++j) {
                        name = base + "_" + std::to_string(j);
                    }
                    used.insert(name);
                    const int pad = l.add_state(name);
                    l.actions[pad].push_back(Action{"tau", Rational(0), {{next, Rational(1)}}});
                    next = pad;
                }
                l.actions[s][a].dist[i].target = next;
            }
        }
    }
    out.layers = h[m.init];
    Rational lowest = 0;
    for (const auto& acts : l.actions) {
        for (const auto& a : acts) {
            lowest = std::min(lowest, a.reward);
        }
    }
    out.shift = -lowest;
    for (auto& acts : l.actions) {
        for (auto& a : acts) {
            a.reward += out.shift;
        }
    }
    out.offset = out.shift * out.layers;
    return out;
}

namespace {

// Conditional expectation of a memoryless scheduler; requires positive goal probability.
Rational memoryless_value(const Mdp& m, const std::vector<int>& choice) {
    const int n = m.size();
    std::vector<SparseRow> p(n);
    std::vector<Rational> b(n);
    for (int s = 0; s < n; ++s) {
        if (choice[s] < 0) {
            continue;
        }
        for (const auto& t : m.actions[s][choice[s]].dist) {
            p[s].emplace_back(t.target, t.prob);
        }
    }
    b[*m.goal] = 1;
    auto y = solve_chain(p, b);
    for (int s = 0; s < n; ++s) {
        b[s] = choice[s] < 0 ? Rational(0) : m.actions[s][choice[s]].reward * y[s];
    }
    auto theta = solve_chain(p, b);
    return theta[m.init] / y[m.init];
}

}  // namespace

AcyclicSolution max_conditional_acyclic(const Mdp& m) {
    acyclic_heights(m);
    CanonicalMdp nf = normal_form(m);
    Scaled scaled = scale_rationals(nf.mdp);
    const Mdp& c = scaled.mdp;
    auto reach = max_reach_prob(c, mask_of(c.size(), {*c.goal}));
    Rational threshold = memoryless_value(c, reach.witness);
    AcyclicSolution out;
    while (true) {
        ThresholdAnswer ans = threshold_acyclic(c, threshold);
        ++out.threshold_calls;
        if (!ans.yes) {
            throw InternalError("acyclic threshold run rejected the value of an existing scheduler");
        }
        if (*ans.value == threshold) {
            out.scheduler = std::move(ans.scheduler);
            break;
        }
        threshold = *ans.value;
    }
    out.value = threshold / Rational(scaled.factor);
    out.scale = scaled.factor;
    out.model = std::move(scaled.mdp);
    return out;
}

AcyclicSolution min_conditional_acyclic(const Mdp& m) {
    AcyclicSolution out = max_conditional_acyclic(scale_rewards(m, Rational(-1)));
    out.value = -out.value;
    return out;
}

}  // namespace cemax
