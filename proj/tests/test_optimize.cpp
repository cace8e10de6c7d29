#include <doctest.h>

#include "cemax/bounds.hpp"
#include "cemax/oracle.hpp"
#include "cemax/optimize.hpp"
#include "cemax/solver.hpp"
#include "fixtures.hpp"

using namespace cemax;
using fixtures::q;

namespace {

ValueTables memoryless_tables(const Mdp& m, const Saturation& sat) {
    ValueTables t;
    t.saturation = sat.point;
    t.y.assign(sat.point + 1, sat.y);
    t.theta.assign(sat.point + 1, sat.theta);
    t.action.assign(sat.point + 1, sat.choice);
    (void)m;
    return t;
}

}  // namespace

TEST_CASE("improvement set of the running example is {r' - 1}") {
    for (long r = 0; r <= 4; ++r) {
        Mdp m = fixtures::run(r);
        auto sat = compute_saturation(m, upper_bound(m));
        auto t = memoryless_tables(m, sat);
        for (Level level = r + 1; level < sat.point; ++level) {
            auto sets = improvement_sets(m, t, level, 0, 1000);
            CHECK(sets.all == std::set<Rational>{Rational(level - 1)});
            CHECK(sets.up == sets.all);
            CHECK(sets.below_b == sets.all);
            auto high = improvement_sets(m, t, level, Rational(level), Rational(level - 1));
            CHECK(high.up.empty());
            CHECK(high.below_b.empty());
        }
    }
}

TEST_CASE("improvement set is empty without probability loss") {
    Mdp m = fixtures::run(1);
    m.actions[fixtures::kS2].pop_back();
    auto sat = compute_saturation(m, 10);
    sat.point = 2;
    auto sets = improvement_sets(m, memoryless_tables(m, sat), 0, 0, 100);
    CHECK(sets.all.empty());
}

TEST_CASE("two candidate actions with distinct quotients") {
    Mdp m;
    for (const char* n : {"s", "goal", "fail"}) {
        m.add_state(n);
    }
    fixtures::add_action(m, 0, "sure", 0, {{1, 1}});
    fixtures::add_action(m, 0, "half", 1, {{1, q(1, 2)}, {2, q(1, 2)}});
    fixtures::add_action(m, 0, "third", 3, {{1, q(1, 3)}, {2, q(2, 3)}});
    m.goal = 1;
    m.fail = 2;
    m.f_set = m.g_set = {1};
    auto sat = compute_saturation(m, upper_bound(m));
    REQUIRE(sat.point >= 1);
    auto sets = improvement_sets(m, memoryless_tables(m, sat), 0, -100, 100);
    // 0 + (0 - 1/2) / (1 - 1/2) and 0 + (0 - 1) / (1 - 1/3).
    CHECK(sets.all == std::set<Rational>{q(-1), q(-3, 2)});
    CHECK(sets.up == sets.all);
}

TEST_CASE("both modes solve the running example") {
    for (long r = 0; r <= 6; ++r) {
        Mdp m = fixtures::run(r);
        const Rational ub = upper_bound(m);
        auto sat = compute_saturation(m, ub);
        auto a = scheduler_improvement(m, sat, ub);
        auto b = naive_loop(m, sat);
        CHECK(a.value == fixtures::run_optimum(r));
        CHECK(b.value == fixtures::run_optimum(r));
        CHECK(a.stats.violations == 0);
        for (Level l = 0; l <= r + 1; ++l) {
            CHECK(a.scheduler.decide(fixtures::kS2, l) == fixtures::kBeta);
        }
        CHECK(a.scheduler.decide(fixtures::kS2, r + 2) == fixtures::kAlpha);
        CHECK(evaluate_scheduler(m, a.scheduler).cexp == a.value);
        CHECK(evaluate_scheduler(m, b.scheduler).cexp == b.value);
    }
}

TEST_CASE("trivial saturation returns the memoryless value without calls") {
    Mdp m = fixtures::run(2);
    m.actions[fixtures::kS2].pop_back();
    auto sat = compute_saturation(m, 10);
    auto a = scheduler_improvement(m, sat, 10);
    CHECK(a.value == 1);
    CHECK(a.stats.threshold_calls == 0);
    auto b = naive_loop(m, sat);
    CHECK(b.value == 1);
    CHECK(b.stats.threshold_calls == 0);
}

TEST_CASE("acyclic example through the general pipeline") {
    auto a = solve(fixtures::acy());
    auto b = solve(fixtures::acy(), SolveOptions{true, {}});
    CHECK(*a.value == q(8, 5));
    CHECK(*b.value == q(8, 5));
}

TEST_CASE("property: both modes equal the oracle and accepted values increase") {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 400 && checked < 80; ++seed) {
        Mdp m = fixtures::random_mdp(seed * 59);
        if (!check_precondition(m)) {
            continue;
        }
        auto p = prepare(m);
        if (!p.verdict.finite) {
            continue;
        }
        const Mdp& c = p.verdict.canonical.mdp;
        if (scheduler_space(c, p.saturation).size > 2e4) {
            continue;
        }
        ++checked;
        const Rational best = brute_force_max(c, p.saturation, 2e4).value;
        for (bool reuse : {true, false}) {
            OptimizeOptions opts;
            opts.reuse_levels = reuse;
            auto a = scheduler_improvement(c, p.saturation, p.scaled_bound, opts);
            CHECK(a.value == best);
            CHECK(a.stats.violations == 0);
            CHECK(evaluate_scheduler(c, a.scheduler).cexp == a.value);
            for (std::size_t i = 1; i < a.stats.accepted.size(); ++i) {
                const bool last = i + 1 == a.stats.accepted.size();
                CHECK((a.stats.accepted[i] > a.stats.accepted[i - 1] || (last && a.stats.accepted[i] == best)));
            }
            for (const auto& [lo, hi] : a.stats.intervals) {
                CHECK(lo <= best);
                CHECK(best < hi);
            }
        }
        auto b = naive_loop(c, p.saturation);
        CHECK(b.value == best);
        for (std::size_t i = 1; i < b.stats.accepted.size(); ++i) {
            CHECK(b.stats.accepted[i] > b.stats.accepted[i - 1]);
        }
    }
    CHECK(checked == 80);
}
