#ifndef BPLAN_FEATURE_CONFIG_HPP
#define BPLAN_FEATURE_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bplan/rational.hpp"

namespace bplan::pddl {

enum class DimensionKind {
    CostBound,
    ResourceUtilisation,
    GoalOrder,
    UtilityValue,
    NumericFluent,
};

std::string dimension_kind_name(DimensionKind k);

// One behaviour-space dimension as configured, with its AddInfo payload.
struct DimensionSpec {
    DimensionKind kind;
    std::vector<std::string> resources;          // resource_utilisation
    std::string fluent;                          // numeric_fluent: ground name, e.g. energy(rover0)
    Rational min, max, epsilon;                  // numeric_fluent box range
    std::map<std::string, Rational> utilities;   // utility_value override (else top-level)
};

// Side configuration the PDDL files cannot carry: selected dimensions in
// order, cost-bound source, soft-goal flag, utilities, plan count.
struct FeatureConfig {
    std::vector<DimensionSpec> dimensions;
    std::optional<Rational> quality_q;
    std::optional<long long> cost_bound;
    bool soft_goals = false;
    std::optional<long long> k;
    std::map<std::string, Rational> utilities;  // goal atom canonical name -> value

    // Effective utilities for a utility dimension: inline payload wins.
    const std::map<std::string, Rational>& utilities_for(const DimensionSpec& d) const {
        return d.utilities.empty() ? utilities : d.utilities;
    }
};

// Number of boxes a numeric dimension discretises into: ceil((max-min)/eps),
// with the top box right-closed at max.
long long box_count(const Rational& min, const Rational& max, const Rational& epsilon);

FeatureConfig parse_feature_config(const std::string& json_text);
FeatureConfig parse_feature_config_file(const std::string& path);

}  // namespace bplan::pddl

#endif
