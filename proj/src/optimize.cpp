#include "cemax/optimize.hpp"

#include "cemax/errors.hpp"

namespace cemax {

ImprovementSets improvement_sets(const Mdp& m, const ValueTables& t, Level r, const Rational& current,
                                 const Rational& b) {
    ImprovementSets out;
    for (int s = 0; s < m.size(); ++s) {
        if (m.is_trap(s)) {
            continue;
        }
        const Rational& ys = t.y[r][s];
        const Rational& ts = t.theta[r][s];
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            auto [ya, ta] = pair_values(m, t, s, static_cast<int>(a), r);
            if (ys > ya) {
                out.all.insert(Rational(r) + (ts - ta) / (ys - ya));
            }
        }
    }
    for (const auto& d : out.all) {
        if (d >= current) {
            out.up.insert(d);
        }
        if (d < b) {
            out.below_b.insert(d);
        }
    }
    return out;
}

namespace {

Optimum trivial(const Mdp& m, const Saturation& sat) {
    Optimum out;
    out.value = sat.value(m.init);
    out.scheduler = memoryless(m, sat.choice);
    out.stats.accepted.push_back(out.value);
    return out;
}

void merge_violations(OptimizeStats& stats, const ThresholdAnswer& ans) { stats.violations += ans.violations; }

}  // namespace

Optimum scheduler_improvement(const Mdp& m, const Saturation& sat, const Rational& ce_ub,
                              const OptimizeOptions& options) {
    if (sat.trivial()) {
        return trivial(m, sat);
    }
    Optimum out;
    OptimizeStats& stats = out.stats;
    stats.calls_per_level.assign(sat.point + 1, 0);
    const Rational start = sat.value(m.init);
    ThresholdOptions topts;
    topts.sweep = options.sweep;
    ThresholdAnswer cur = threshold_solve(m, start, sat, topts);
    ++stats.threshold_calls;
    merge_violations(stats, cur);
    if (!cur.value) {
        throw InternalError("threshold scheduler at the memoryless value misses goal");
    }
    stats.accepted.push_back(*cur.value);
    auto finish = [&](const Rational& value, ThresholdAnswer& ans) {
        out.value = value;
        out.scheduler = std::move(ans.scheduler);
        return std::move(out);
    };
    if (*cur.value == start) {
        return finish(start, cur);
    }
    Rational a = *cur.value;
    Rational b = ce_ub + 1;
    stats.intervals.emplace_back(a, b);
    for (Level r = sat.point - 1; r >= 0; --r) {
        while (true) {
            ImprovementSets sets = improvement_sets(m, cur.tables, r, a, b);
            if (sets.below_b.empty()) {
                break;
            }
            std::set<Rational> k = sets.up;
            k.insert(a);
            bool restart = false;
            while (!restart) {
                auto it = k.lower_bound(b);
                if (it == k.begin()) {
                    throw InternalError("no candidate threshold inside the interval");
                }
                --it;
                if (*it < a) {
                    throw InternalError("no candidate threshold inside the interval");
                }
                const Rational cand = *it;
                ThresholdOptions call = topts;
                if (options.reuse_levels) {
                    call.frozen = &cur.tables;
                    call.frozen_level = r;
                }
                ThresholdAnswer next = threshold_solve(m, cand, sat, call);
                ++stats.threshold_calls;
                ++stats.calls_per_level[r];
                merge_violations(stats, next);
                if (!next.yes) {
                    b = cand;
                    if (next.value && *next.value > a) {
                        a = *next.value;
                        k.insert(a);
                    }
                    stats.intervals.emplace_back(a, b);
                    continue;
                }
                if (*next.value == cand) {
                    stats.accepted.push_back(cand);
                    return finish(cand, next);
                }
                a = *next.value;
                stats.intervals.emplace_back(a, b);
                stats.accepted.push_back(a);
                cur = std::move(next);
                restart = true;
            }
        }
    }
    return finish(a, cur);
}

Optimum naive_loop(const Mdp& m, const Saturation& sat, const OptimizeOptions& options) {
    if (sat.trivial()) {
        return trivial(m, sat);
    }
    Optimum out;
    ThresholdOptions topts;
    topts.sweep = options.sweep;
    Rational threshold = sat.value(m.init);
    out.stats.accepted.push_back(threshold);
    while (true) {
        ThresholdAnswer ans = threshold_solve(m, threshold, sat, topts);
        ++out.stats.threshold_calls;
        out.stats.violations += ans.violations;
        if (!ans.yes) {
            throw InternalError("threshold algorithm rejected the value of an existing scheduler");
        }
        if (*ans.value == threshold) {
            out.value = threshold;
            out.scheduler = std::move(ans.scheduler);
            return out;
        }
        threshold = *ans.value;
        out.stats.accepted.push_back(threshold);
    }
}

}  // namespace cemax
