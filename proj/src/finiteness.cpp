#include "cemax/finiteness.hpp"

#include <algorithm>

#include "cemax/errors.hpp"
#include "cemax/transform.hpp"

namespace cemax {

std::optional<EndComponent> positive_end_component(const Mdp& m) {
    SubMdp sub = SubMdp::full(m);
    if (m.goal) {
        sub.state[*m.goal] = 0;
    }
    if (m.fail) {
        sub.state[*m.fail] = 0;
    }
    for (auto& ec : max_end_components(m, sub)) {
        for (std::size_t i = 0; i < ec.states.size(); ++i) {
            for (int a : ec.actions[i]) {
                if (m.actions[ec.states[i]][a].reward > 0) {
                    return std::move(ec);
                }
            }
        }
    }
    return std::nullopt;
}

SubMdp without_goal(const Mdp& m) {
    SubMdp sub = SubMdp::full(m);
    if (!m.goal) {
        return sub;
    }
    sub.state[*m.goal] = 0;
    for (bool changed = true; changed;) {
        changed = false;
        for (int s = 0; s < m.size(); ++s) {
            if (!sub.state[s] || m.is_trap(s)) {
                continue;
            }
            bool any = false;
            for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
                if (!sub.action[s][a]) {
                    continue;
                }
                bool leaves = std::any_of(m.actions[s][a].dist.begin(), m.actions[s][a].dist.end(),
                                          [&](const Transition& t) { return !sub.state[t.target]; });
                if (leaves) {
                    sub.action[s][a] = 0;
                    changed = true;
                } else {
                    any = true;
                }
            }
            if (!any) {
                sub.state[s] = 0;
                changed = true;
            }
        }
    }
    return sub;
}

std::optional<Cycle> critical_cycle(const Mdp& m) {
    if (!m.goal) {
        throw PreconditionViolated("critical-cycle test needs a designated goal");
    }
    SubMdp sub = without_goal(m);
    if (!sub.state[m.init]) {
        return std::nullopt;
    }
    return find_positive_cycle(m, sub, m.init);
}

Verdict check_finiteness(const Mdp& m) {
    for (int s = 0; s < m.size(); ++s) {
        for (const auto& a : m.actions[s]) {
            if (a.reward < 0) {
                throw PreconditionViolated("state '" + m.names[s] + "' action '" + a.label + "': negative reward");
            }
        }
    }
    CanonicalMdp nf = normal_form(m);
    Scaled scaled = scale_rationals(nf.mdp);
    Verdict v;
    v.scale = scaled.factor;
    if (auto ec = positive_end_component(scaled.mdp)) {
        v.positive_ec = std::move(ec);
        v.witness_model = std::move(scaled.mdp);
        return v;
    }
    std::vector<int> class_of;
    Mdp quotient = mec_quotient(scaled.mdp, &class_of);
    std::vector<Origin> origin(quotient.size());
    for (int s = scaled.mdp.size() - 1; s >= 0; --s) {
        origin[class_of[s]] = nf.origin[s];
    }
    if (auto cycle = critical_cycle(quotient)) {
        v.cycle = std::move(cycle);
        v.witness_model = std::move(quotient);
        return v;
    }
    v.finite = true;
    v.canonical = {std::move(quotient), std::move(origin)};
    return v;
}

}  // namespace cemax
