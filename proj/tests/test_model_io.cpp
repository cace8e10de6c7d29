#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cemax/errors.hpp"
#include "cemax/model_io.hpp"
#include "cemax/solver.hpp"
#include "fixtures.hpp"

using namespace cemax;
using fixtures::q;

namespace {

std::string read(const std::string& name) {
    std::ifstream in(std::string(CEMAX_TEST_DATA) + "/" + name);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Mdp undesignated(Mdp m) {
    m.goal.reset();
    m.fail.reset();
    return m;
}

}  // namespace

TEST_CASE("RUN(0) text parses to the fixture") {
    Mdp m = parse_model(read("run0.cmdp"));
    CHECK(m.size() == 5);
    int blocks = 0;
    for (const auto& acts : m.actions) {
        blocks += static_cast<int>(acts.size());
    }
    CHECK(blocks == 4);
    CHECK(m == undesignated(fixtures::run(0)));
}

TEST_CASE("ACY text parses to a six-state model") {
    Mdp m = parse_model(read("acy.cmdp"));
    CHECK(m.size() == 6);
    CHECK(m == undesignated(fixtures::acy()));
}

TEST_CASE("unknown target is a semantic error") {
    std::string text = "cmdp 1\nstates: a goal\ninit: a\nF: goal\nG: goal\naction a x reward 0\n  -> s9 : 1/2\n";
    CHECK_THROWS_AS(parse_model(text), SemanticError);
}

TEST_CASE("duplicate action and empty sets are semantic errors") {
    std::string base = "cmdp 1\nstates: a goal\ninit: a\n";
    std::string acts = "action a x reward 0\n  -> goal : 1\n";
    CHECK_THROWS_AS(parse_model(base + "F: goal\nG: goal\n" + acts + acts), SemanticError);
    CHECK_THROWS_AS(parse_model(base + "F:\nG: goal\n" + acts), SemanticError);
    CHECK_THROWS_AS(parse_model(base + "F: goal\n" + acts), SemanticError);
    CHECK_THROWS_AS(parse_model("cmdp 1\nstates: a a\ninit: a\nF: a\nG: a\n"), SemanticError);
}

TEST_CASE("distribution defects surface as semantic errors") {
    std::string text = "cmdp 1\nstates: a goal\ninit: a\nF: goal\nG: goal\naction a x reward 0\n  -> goal : 3/4\n";
    CHECK_THROWS_AS(parse_model(text), SemanticError);
    std::string empty = "cmdp 1\nstates: a goal\ninit: a\nF: goal\nG: goal\naction a x reward 0\n";
    CHECK_THROWS_AS(parse_model(empty), SemanticError);
}

TEST_CASE("syntax errors carry line and column") {
    try {
        parse_model("cmdp 1\nstates: a goal\ninit: a\nF: goal\nG: goal\naction a x reward 1/2\n  -> goal : 0.5\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 7);
        CHECK(e.column() == 13);
        CHECK(std::string(e.what()).find("7:13") == 0);
    }
    CHECK_THROWS_AS(parse_model("states: a\n"), ParseError);
    CHECK_THROWS_AS(parse_model("cmdp 2\n"), ParseError);
    CHECK_THROWS_AS(parse_model("cmdp 1\n  -> a : 1\n"), ParseError);
    CHECK_THROWS_AS(parse_model("cmdp 1\nstates: a!\n"), ParseError);
    CHECK_THROWS_AS(parse_model("cmdp 1\nfoo: a\n"), ParseError);
    CHECK_THROWS_AS(parse_model("cmdp 1\naction a x reward\n"), ParseError);
    CHECK_THROWS_AS(parse_model(""), ParseError);
}

TEST_CASE("comments and blank lines are ignored") {
    std::string text =
        "# header comment\n\ncmdp 1 # version\nstates: a goal # two\ninit: a\nF: goal\nG: goal\n"
        "action a x reward 2 # pays\n  -> goal : 1 # sure\n";
    Mdp m = parse_model(text);
    CHECK(m.actions[0][0].reward == 2);
}

TEST_CASE("rational and negative rewards are accepted") {
    std::string text = "cmdp 1\nstates: a goal\ninit: a\nF: goal\nG: goal\naction a x reward -5/3\n  -> goal : 1\n";
    CHECK(parse_model(text).actions[0][0].reward == q(-5, 3));
}

TEST_CASE("emission round-trips the fixtures") {
    for (const Mdp& m : {fixtures::run(0), fixtures::acy(), fixtures::run(3, "s2", false)}) {
        CHECK(parse_model(emit_model(m)) == m);
    }
}

TEST_CASE("single goal state emits declarations only") {
    Mdp m;
    m.add_state("goal");
    m.f_set = {0};
    m.g_set = {0};
    std::string text = emit_model(m);
    CHECK(text.find("action") == std::string::npos);
    CHECK(parse_model(text) == m);
}

TEST_CASE("property: round trip on generated models") {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        Mdp m = fixtures::random_mdp(seed);
        Mdp back = parse_model(emit_model(m));
        CHECK(back == m);
        CHECK(emit_model(back) == emit_model(m));
        ++checked;
    }
    CHECK(checked >= 20);
}

TEST_CASE("fractions are emitted in lowest terms") {
    Mdp m = fixtures::run(0);
    m.actions[1][0].reward = Rational(6, 4);
    m.actions[1][0].reward.canonicalize();
    std::string text = emit_model(m);
    CHECK(text.find("reward 3/2") != std::string::npos);
    CHECK(text.find("6/4") == std::string::npos);
    CHECK(text.find("-> s1 : 1/2") != std::string::npos);
}

TEST_CASE("exported RUN(0) solution") {
    auto ans = solve(fixtures::run(0, "s0", false));
    ResultSummary summary{*ans.value, ans.saturation.point, *ans.upper_bound, ans.stats.threshold_calls};
    auto j = nlohmann::json::parse(export_result(ans.canonical(), summary, ans.scheduler));
    CHECK(j["value"]["num"] == "2");
    CHECK(j["value"]["den"] == "5");
    CHECK(j["saturation_point"] == ans.saturation.point);
    CHECK(j["decisions"].size() == ans.scheduler.table.size());
    CHECK(j["tail"]["s2"] == "alpha");
    CHECK(j.contains("upper_bound"));
    CHECK(j["threshold_calls"] == ans.stats.threshold_calls);
}

TEST_CASE("exported ACY solution") {
    auto ans = solve(fixtures::acy(false));
    ResultSummary summary{*ans.value, ans.saturation.point, *ans.upper_bound, ans.stats.threshold_calls};
    auto j = nlohmann::json::parse(export_result(ans.canonical(), summary, ans.scheduler));
    CHECK(j["value"]["num"] == "8");
    CHECK(j["value"]["den"] == "5");
}

TEST_CASE("empty table exports no decisions") {
    Mdp m = fixtures::run(0);
    ResultSummary summary{q(1), 0, q(1), 0};
    auto j = nlohmann::json::parse(export_result(m, summary, memoryless(m, {0, 0, 0, -1, -1})));
    CHECK(j["decisions"].is_array());
    CHECK(j["decisions"].empty());
    CHECK(j["tail"]["s0"] == "tau");
}
