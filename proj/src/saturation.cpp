#include "cemax/saturation.hpp"

#include "cemax/errors.hpp"
#include "cemax/reach.hpp"

namespace cemax {

std::pair<Rational, Rational> action_values(const Action& a, const std::vector<Rational>& y,
                                            const std::vector<Rational>& theta) {
    Rational ya = 0;
    Rational ta = 0;
    for (const auto& t : a.dist) {
        ya += t.prob * y[t.target];
        ta += t.prob * theta[t.target];
    }
    ta += a.reward * ya;
    return {ya, ta};
}

Saturation max_prob_scheduler(const Mdp& m) {
    if (!m.goal || !m.fail) {
        throw PreconditionViolated("saturation needs designated goal and fail states");
    }
    const int n = m.size();
    auto reach = max_reach_prob(m, mask_of(n, {*m.goal}));
    const auto& p = reach.values;
    Mdp weighted = m;
    ActionMask allowed(n);
    for (int s = 0; s < n; ++s) {
        allowed[s].assign(m.actions[s].size(), 0);
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            Rational e = 0;
            for (const auto& t : m.actions[s][a].dist) {
                e += t.prob * p[t.target];
            }
            allowed[s][a] = e == p[s];
            weighted.actions[s][a].reward = m.actions[s][a].reward * p[s];
        }
    }
    auto exp = max_total_exp(weighted, mask_of(n, {*m.goal, *m.fail}), allowed);
    Saturation sat;
    sat.choice = exp.witness;
    sat.y = p;
    sat.theta = exp.values;
    return sat;
}

void saturation_point(const Mdp& m, const Rational& ce_ub, Saturation& sat) {
    sat.d.reset();
    sat.point = 0;
    for (int s = 0; s < m.size(); ++s) {
        for (const auto& a : m.actions[s]) {
            auto [ya, ta] = action_values(a, sat.y, sat.theta);
            if (ya < sat.y[s]) {
                Rational q = (sat.theta[s] - ta) / (sat.y[s] - ya);
                if (!sat.d || q < *sat.d) {
                    sat.d = q;
                }
            }
        }
    }
    if (sat.d) {
        Integer c = ceil(ce_ub - *sat.d);
        sat.point = c > 0 ? to_int64(c) : 0;
    }
}

Saturation compute_saturation(const Mdp& m, const Rational& ce_ub) {
    Saturation sat = max_prob_scheduler(m);
    saturation_point(m, ce_ub, sat);
    return sat;
}

}  // namespace cemax
