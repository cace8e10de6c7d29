#include "cemax/solver.hpp"

#include "cemax/bounds.hpp"
#include "cemax/errors.hpp"

namespace cemax {

Prepared prepare(const Mdp& m) {
    Prepared p;
    p.verdict = check_finiteness(m);
    if (!p.verdict.finite) {
        return p;
    }
    const Mdp& c = p.verdict.canonical.mdp;
    p.scaled_bound = upper_bound(c);
    p.saturation = compute_saturation(c, p.scaled_bound);
    return p;
}

Answer solve(const Mdp& m, const SolveOptions& options) {
    Prepared p = prepare(m);
    Answer ans;
    ans.verdict = std::move(p.verdict);
    if (!ans.verdict.finite) {
        return ans;
    }
    const Mdp& c = ans.verdict.canonical.mdp;
    const Rational scale(ans.verdict.scale);
    ans.saturation = std::move(p.saturation);
    Optimum opt = options.naive ? naive_loop(c, ans.saturation, options.optimize)
                                : scheduler_improvement(c, ans.saturation, p.scaled_bound, options.optimize);
    ans.value = opt.value / scale;
    ans.upper_bound = p.scaled_bound / scale;
    ans.scheduler = std::move(opt.scheduler);
    ans.stats = std::move(opt.stats);
    return ans;
}

ThresholdQuery threshold_query(const Mdp& m, const Rational& threshold, Relation rel) {
    Prepared p = prepare(m);
    ThresholdQuery q;
    q.verdict = std::move(p.verdict);
    q.finite = q.verdict.finite;
    if (!q.finite) {
        q.holds = rel == Relation::ge || rel == Relation::gt;
        return q;
    }
    const Rational scaled = threshold * Rational(q.verdict.scale);
    if (scaled < 0) {
        // Rewards are non-negative, so every value clears a negative threshold.
        q.holds = rel == Relation::ge || rel == Relation::gt;
        q.answer = threshold_solve(q.verdict.canonical.mdp, Rational(0), p.saturation);
        return q;
    }
    q.answer = threshold_solve(q.verdict.canonical.mdp, scaled, p.saturation);
    q.holds = decide(q.answer, scaled, rel);
    return q;
}

}  // namespace cemax
