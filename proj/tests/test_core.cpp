#include <doctest.h>

#include "cemax/errors.hpp"
#include "cemax/mdp.hpp"
#include "cemax/rational.hpp"
#include "cemax/scheduler.hpp"
#include "fixtures.hpp"

using namespace cemax;
using fixtures::q;

TEST_CASE("rational literals parse to lowest terms") {
    Rational x;
    CHECK(parse_rational("6/4", x));
    CHECK(to_string(x) == "3/2");
    CHECK(parse_rational("-7", x));
    CHECK(x == -7);
    CHECK(parse_rational("0/5", x));
    CHECK(to_string(x) == "0");
    CHECK_FALSE(parse_rational("1/0", x));
    CHECK_FALSE(parse_rational("0.5", x));
    CHECK_FALSE(parse_rational("1/", x));
    CHECK_FALSE(parse_rational("", x));
    CHECK_FALSE(parse_rational("a/b", x));
}

TEST_CASE("rational ceiling and floor follow the sign") {
    CHECK(ceil(q(7, 2)) == 4);
    CHECK(ceil(q(-7, 2)) == -3);
    CHECK(floor(q(-7, 2)) == -4);
    CHECK(ceil(q(4)) == 4);
    CHECK(is_integer(q(8, 4)));
    CHECK_FALSE(is_integer(q(1, 3)));
    CHECK_THROWS_AS(to_int64(Integer("100000000000000000000000")), std::overflow_error);
}

TEST_CASE("property: a/b times b/a is one and normalization is canonical") {
    for (long a = -12; a <= 12; ++a) {
        for (long b = 1; b <= 12; ++b) {
            if (a == 0) {
                continue;
            }
            Rational x(a, b);
            x.canonicalize();
            CHECK(x * (1 / x) == 1);
            Rational y;
            REQUIRE(parse_rational(std::to_string(a * 3) + "/" + std::to_string(b * 3), y));
            CHECK(y == x);
            CHECK(y.get_den() > 0);
            CHECK(gcd(y.get_num(), y.get_den()) == 1);
        }
    }
}

TEST_CASE("running example validates") { CHECK(validate_mdp(fixtures::run(0)).empty()); }

TEST_CASE("distribution sum defect is reported once") {
    Mdp m = fixtures::run(0);
    m.actions[2][0].dist[0].prob = q(3, 4);
    auto v = validate_mdp(m);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("distribution sum") != std::string::npos);
    CHECK(v[0].find("s2") != std::string::npos);
}

TEST_CASE("negative reward is reported unless allowed") {
    Mdp m = fixtures::run(0);
    m.actions[1][0].reward = -1;
    auto v = validate_mdp(m);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("negative reward") != std::string::npos);
    CHECK(validate_mdp(m, {.allow_negative_rewards = true}).empty());
}

TEST_CASE("structural defects are reported") {
    Mdp m = fixtures::run(0);
    m.actions[2][1].label = "alpha";
    m.actions[0][0].dist[0].target = 9;
    m.init = 7;
    CHECK(validate_mdp(m).size() >= 3);
}

TEST_CASE("S2 on RUN(0) attains 2/5") {
    auto v = evaluate_scheduler(fixtures::run(0), fixtures::run_sn(2));
    REQUIRE(v.cexp);
    CHECK(*v.cexp == q(2, 5));
}

TEST_CASE("memoryless beta on RUN(2) yields r") {
    Mdp m = fixtures::run(2);
    auto v = evaluate_scheduler(m, memoryless(m, {0, 0, fixtures::kBeta, -1, -1}));
    REQUIRE(v.cexp);
    CHECK(*v.cexp == 2);
}

TEST_CASE("scheduler missing goal has no conditional value") {
    Mdp m = fixtures::run(0);
    m.actions[1][0].dist[0].target = 4;
    auto v = evaluate_scheduler(m, memoryless(m, {0, 0, fixtures::kBeta, -1, -1}));
    CHECK(v.prob_goal == 0);
    CHECK(v.partial_exp == 0);
    CHECK_FALSE(v.cexp.has_value());
}

TEST_CASE("incomplete scheduler is rejected") {
    auto s = fixtures::run_sn(2);
    s.table.erase({fixtures::kS2, 1});
    CHECK_THROWS_AS(evaluate_scheduler(fixtures::run(0), s), SchedulerIncomplete);
}

TEST_CASE("property: closed form of S_n on RUN(r)") {
    for (long r = 0; r <= 6; ++r) {
        Mdp m = fixtures::run(r);
        for (long n = 0; n <= 12; ++n) {
            auto v = evaluate_scheduler(m, fixtures::run_sn(n));
            Rational p = 1;
            for (long i = 0; i < n; ++i) {
                p /= 2;
            }
            CHECK(v.prob_goal == q(1, 2) + q(1, 2) * p);
            CHECK(v.partial_exp == q(1, 2) * r + q(1, 2) * n * p);
            REQUIRE(v.cexp);
            CHECK(*v.cexp == fixtures::run_sn_value(r, n));
            CHECK(evaluate_scheduler(m, fixtures::run_sn(n)) == v);
        }
    }
}

TEST_CASE("reachable pairs of S2") {
    auto pairs = reachable_pairs(fixtures::run(0), fixtures::run_sn(2));
    std::vector<std::pair<int, Level>> expected{{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}};
    CHECK(pairs == expected);
}

TEST_CASE("restriction to reachable states keeps goal and fail") {
    Mdp m = fixtures::run(0, "s2");
    std::vector<int> map;
    Mdp r = restrict_to_reachable(m, &map);
    CHECK(r.size() == 3);
    CHECK(map[0] == -1);
    CHECK(r.names[*r.goal] == "goal");
    CHECK(r.names[*r.fail] == "fail");
    CHECK(r.names[r.init] == "s2");
}

TEST_CASE("non-integer reward blocks level arithmetic") {
    Action a{"x", q(1, 2), {{0, 1}}};
    CHECK_THROWS_AS(integer_reward(a), PreconditionViolated);
}
