#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cemax/errors.hpp"
#include "cemax/model_io.hpp"
#include "cemax/oracle.hpp"
#include "cemax/solver.hpp"
#include "cemax/transform.hpp"

namespace {

constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kInfinite = 2;
constexpr int kInputError = 3;

void print_witness(const cemax::Verdict& v) {
    const auto& m = v.witness_model;
    if (v.cycle) {
        std::cout << "witness: cycle";
        for (const auto& [s, a] : v.cycle->steps) {
            std::cout << " " << m.names[s] << " -" << m.actions[s][a].label << "->";
        }
        std::cout << " " << m.names[v.cycle->steps.front().first] << "\n";
    } else if (v.positive_ec) {
        std::cout << "witness: end component";
        for (int s : v.positive_ec->states) {
            std::cout << " " << m.names[s];
        }
        std::cout << "\n";
    }
}

void print_scheduler(const cemax::Mdp& m, const cemax::RewardBasedScheduler& sched) {
    std::cout << "saturation " << sched.saturation << "\n";
    for (const auto& [key, a] : sched.table) {
        std::cout << "decision " << m.names[key.first] << " " << key.second << " " << m.actions[key.first][a].label
                  << "\n";
    }
    for (int s = 0; s < m.size() && s < static_cast<int>(sched.tail.size()); ++s) {
        if (sched.tail[s] >= 0) {
            std::cout << "tail " << m.names[s] << " " << m.actions[s][sched.tail[s]].label << "\n";
        }
    }
}

cemax::Rational parse_value(const std::string& text) {
    cemax::Rational q;
    if (!cemax::parse_rational(text, q)) {
        throw cemax::Error("malformed threshold '" + text + "'; use an integer or a/b");
    }
    return q;
}

cemax::Relation parse_relation(const std::string& text) {
    if (text == "GE") {
        return cemax::Relation::ge;
    }
    if (text == "GT") {
        return cemax::Relation::gt;
    }
    if (text == "LE") {
        return cemax::Relation::le;
    }
    if (text == "LT") {
        return cemax::Relation::lt;
    }
    throw cemax::Error("unknown relation '" + text + "'; use GE, GT, LE or LT");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact maximal conditional expected rewards in finite MDPs"};
    app.require_subcommand(1);
    std::string model_path;

    auto* check = app.add_subcommand("check-finite", "decide whether the maximum is finite");
    check->add_option("model", model_path, "model file (.cmdp)")->required();

    auto* bound = app.add_subcommand("bound", "print the upper bound");
    bound->add_option("model", model_path, "model file (.cmdp)")->required();

    std::string value_text;
    std::string rel_text = "GE";
    auto* thr = app.add_subcommand("threshold", "compare the maximum with a threshold");
    thr->add_option("model", model_path, "model file (.cmdp)")->required();
    thr->add_option("--value", value_text, "threshold as an integer or a/b")->required();
    thr->add_option("--rel", rel_text, "GE, GT, LE or LT")->capture_default_str();

    bool naive = false;
    bool stats = false;
    std::string export_path;
    auto* solve = app.add_subcommand("solve", "compute the maximum and an optimal scheduler");
    solve->add_option("model", model_path, "model file (.cmdp)")->required();
    solve->add_flag("--naive", naive, "repeat the threshold algorithm instead of level-wise improvement");
    solve->add_option("--export", export_path, "write the result as JSON");
    solve->add_flag("--stats", stats, "print run statistics to stderr");

    auto* min_acyclic = app.add_subcommand("min-acyclic", "minimal conditional expectation of an acyclic model");
    min_acyclic->add_option("model", model_path, "model file (.cmdp)")->required();

    double cap = 1e6;
    auto* oracle = app.add_subcommand("oracle", "brute-force maximum over reward-based schedulers");
    oracle->add_option("model", model_path, "model file (.cmdp)")->required();
    oracle->add_option("--cap", cap, "largest scheduler space to enumerate")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    try {
        const auto started = std::chrono::steady_clock::now();
        const cemax::Mdp model = cemax::load_model(model_path);

        if (*check) {
            auto verdict = cemax::check_finiteness(model);
            if (verdict.finite) {
                std::cout << "finite\n";
                return kYes;
            }
            std::cout << "infinite\n";
            print_witness(verdict);
            return kInfinite;
        }
        if (*bound) {
            auto prepared = cemax::prepare(model);
            if (!prepared.verdict.finite) {
                std::cout << "infinite\n";
                return kInfinite;
            }
            std::cout << cemax::to_string(prepared.scaled_bound / cemax::Rational(prepared.verdict.scale)) << "\n";
            return kYes;
        }
        if (*thr) {
            const auto threshold = parse_value(value_text);
            const auto rel = parse_relation(rel_text);
            auto q = cemax::threshold_query(model, threshold, rel);
            std::cout << (q.holds ? "yes" : "no") << "\n";
            return q.holds ? kYes : kNo;
        }
        if (*solve) {
            cemax::SolveOptions options;
            options.naive = naive;
            auto ans = cemax::solve(model, options);
            if (!ans.finite()) {
                std::cout << "infinite\n";
                print_witness(ans.verdict);
                return kInfinite;
            }
            std::cout << cemax::to_string(*ans.value) << "\n";
            print_scheduler(ans.canonical(), ans.scheduler);
            if (!export_path.empty()) {
                cemax::ResultSummary summary{*ans.value, ans.saturation.point, *ans.upper_bound,
                                             ans.stats.threshold_calls};
                std::ofstream out(export_path);
                if (!out) {
                    throw cemax::Error("cannot write '" + export_path + "'");
                }
                out << cemax::export_result(ans.canonical(), summary, ans.scheduler);
            }
            if (stats) {
                const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                    std::chrono::steady_clock::now() - started)
                                    .count();
                std::cerr << "threshold_calls=" << ans.stats.threshold_calls << "\n";
                std::cerr << "saturation_point=" << ans.saturation.point << "\n";
                std::cerr << "upper_bound=" << cemax::to_string(*ans.upper_bound) << "\n";
                std::cerr << "scale=" << ans.verdict.scale.get_str() << "\n";
                std::cerr << "wall_ms=" << ms << "\n";
            }
            return kYes;
        }
        if (*min_acyclic) {
            auto sol = cemax::min_conditional_acyclic(model);
            std::cout << cemax::to_string(sol.value) << "\n";
            return kYes;
        }
        if (*oracle) {
            auto prepared = cemax::prepare(model);
            if (!prepared.verdict.finite) {
                std::cout << "infinite\n";
                return kInfinite;
            }
            const auto& c = prepared.verdict.canonical.mdp;
            auto res = cemax::brute_force_max(c, prepared.saturation, cap);
            std::cout << cemax::to_string(res.value / cemax::Rational(prepared.verdict.scale)) << "\n";
            print_scheduler(c, res.scheduler);
            return kYes;
        }
    } catch (const cemax::InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInputError;
    } catch (const cemax::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
