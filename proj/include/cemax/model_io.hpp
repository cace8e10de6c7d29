#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cemax/mdp.hpp"
#include "cemax/rational.hpp"
#include "cemax/scheduler.hpp"

namespace cemax {

/// Parses the `.cmdp` text format. Rewards may be rational or negative.
/// Throws ParseError (with line and column) or SemanticError.
Mdp parse_model(std::string_view text);
Mdp load_model(const std::string& path);

/// Canonical text; parse_model(emit_model(m)) == m for normalized m.
std::string emit_model(const Mdp& m);

struct ResultSummary {
    Rational value;
    Level saturation_point = 0;
    Rational upper_bound;
    std::int64_t threshold_calls = 0;
};

/// JSON object with value, saturation_point, decisions, tail, upper_bound, threshold_calls.
std::string export_result(const Mdp& m, const ResultSummary& result, const RewardBasedScheduler& sched);

}  // namespace cemax
