#include <doctest.h>

#include <functional>

#include "cemax/errors.hpp"
#include "cemax/oracle.hpp"
#include "cemax/solver.hpp"
#include "fixtures.hpp"

using namespace cemax;
using fixtures::q;

TEST_CASE("oracle values of the examples") {
    for (long r : {0L, 1L}) {
        auto p = prepare(fixtures::run(r));
        const Mdp& c = p.verdict.canonical.mdp;
        auto res = brute_force_max(c, p.saturation);
        CHECK(res.value == fixtures::run_optimum(r));
        const int s2 = c.find("s2");
        for (Level l = 0; l <= r + 1; ++l) {
            CHECK(c.actions[s2][res.scheduler.decide(s2, l)].label == "beta");
        }
        CHECK(c.actions[s2][res.scheduler.decide(s2, r + 2)].label == "alpha");
    }
    CHECK(fixtures::run_optimum(1) == q(11, 9));
    auto p = prepare(fixtures::acy());
    const Mdp& c = p.verdict.canonical.mdp;
    auto res = brute_force_max(c, p.saturation);
    CHECK(res.value == q(8, 5));
    CHECK(evaluate_scheduler(c, res.scheduler).cexp == q(8, 5));
}

TEST_CASE("space size and cap") {
    auto p = prepare(fixtures::run(0));
    const Mdp& c = p.verdict.canonical.mdp;
    auto space = scheduler_space(c, p.saturation);
    CHECK(space.saturation == p.saturation.point);
    CHECK(space.size > 1);
    CHECK_THROWS_AS(brute_force_max(c, p.saturation, 1), SpaceTooLarge);
    try {
        brute_force_max(c, p.saturation, 1);
    } catch (const SpaceTooLarge& e) {
        CHECK(e.size() == space.size);
    }
}

TEST_CASE("oracle needs designated traps") {
    Mdp m = fixtures::run(0, "s0", false);
    Saturation sat;
    CHECK_THROWS_AS(brute_force_max(m, sat), PreconditionViolated);
}

TEST_CASE("property: oracle dominates every scheduler in the space") {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 300 && checked < 40; ++seed) {
        Mdp m = fixtures::random_mdp(seed * 83);
        if (!check_precondition(m)) {
            continue;
        }
        auto p = prepare(m);
        if (!p.verdict.finite) {
            continue;
        }
        const Mdp& c = p.verdict.canonical.mdp;
        auto space = scheduler_space(c, p.saturation);
        if (space.size > 2000) {
            continue;
        }
        ++checked;
        auto best = brute_force_max(c, p.saturation);
        CHECK(evaluate_scheduler(c, best.scheduler).cexp == best.value);
        // Independent enumeration through evaluate_scheduler.
        RewardBasedScheduler sched;
        sched.saturation = p.saturation.point;
        sched.tail = p.saturation.choice;
        std::optional<Rational> top;
        std::function<void(std::size_t)> go = [&](std::size_t i) {
            if (i == space.pairs.size()) {
                RewardBasedScheduler pruned = sched;
                pruned.table.clear();
                for (const auto& key : reachable_pairs(c, sched)) {
                    pruned.table[key] = sched.table.at(key);
                }
                auto v = evaluate_scheduler(c, pruned);
                if (v.cexp) {
                    CHECK(*v.cexp <= best.value);
                    if (!top || *v.cexp > *top) {
                        top = v.cexp;
                    }
                }
                return;
            }
            auto [s, l] = space.pairs[i];
            for (std::size_t a = 0; a < c.actions[s].size(); ++a) {
                sched.table[{s, l}] = static_cast<int>(a);
                go(i + 1);
            }
        };
        go(0);
        REQUIRE(top);
        CHECK(*top == best.value);
    }
    CHECK(checked == 40);
}
