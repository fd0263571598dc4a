#include "bplan/feature_config.hpp"

#include <fstream>
#include <sstream>

#include "bplan/pddl.hpp"
#include "json.hpp"

namespace bplan::pddl {

using nlohmann::json;

std::string dimension_kind_name(DimensionKind k) {
    switch (k) {
        case DimensionKind::CostBound: return "cost_bound";
        case DimensionKind::ResourceUtilisation: return "resource_utilisation";
        case DimensionKind::GoalOrder: return "goal_order";
        case DimensionKind::UtilityValue: return "utility_value";
        default: return "numeric_fluent";
    }
}

long long box_count(const Rational& min, const Rational& max, const Rational& epsilon) {
    return ((max - min) / epsilon).ceil();
}

namespace {

Rational rational_from(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_float()) return Rational::from_double(j.get<double>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw ValidationError("feature config: " + where + " must be a number");
}

std::map<std::string, Rational> utilities_from(const json& j, const std::string& where) {
    std::map<std::string, Rational> out;
    if (!j.is_object()) throw ValidationError("feature config: " + where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        Rational v = rational_from(it.value(), where + "." + it.key());
        if (v.sign() < 0)
            throw ValidationError("feature config: negative utility for " + it.key());
        out[it.key()] = v;
    }
    return out;
}

DimensionSpec dimension_from(const json& j, size_t index) {
    std::string where = "dimensions[" + std::to_string(index) + "]";
    if (!j.is_object() || !j.contains("kind"))
        throw ValidationError("feature config: " + where + " needs a kind");
    DimensionSpec d;
    std::string kind = j["kind"].get<std::string>();
    if (kind == "cost_bound") {
        d.kind = DimensionKind::CostBound;
    } else if (kind == "resource_utilisation") {
        d.kind = DimensionKind::ResourceUtilisation;
        if (!j.contains("resources") || !j["resources"].is_array() || j["resources"].empty())
            throw ValidationError("feature config: " + where + " needs a resources array");
        for (const auto& r : j["resources"]) d.resources.push_back(r.get<std::string>());
    } else if (kind == "goal_order") {
        d.kind = DimensionKind::GoalOrder;
    } else if (kind == "utility_value") {
        d.kind = DimensionKind::UtilityValue;
        if (j.contains("utilities")) d.utilities = utilities_from(j["utilities"], where);
    } else if (kind == "numeric_fluent") {
        d.kind = DimensionKind::NumericFluent;
        for (const char* key : {"fluent", "min", "max", "epsilon"})
            if (!j.contains(key))
                throw ValidationError("feature config: " + where + " needs " + key);
        d.fluent = j["fluent"].get<std::string>();
        d.min = rational_from(j["min"], where + ".min");
        d.max = rational_from(j["max"], where + ".max");
        d.epsilon = rational_from(j["epsilon"], where + ".epsilon");
        if (d.epsilon.sign() <= 0)
            throw ValidationError("feature config: " + where + " epsilon must be > 0");
        if (d.min >= d.max)
            throw ValidationError("feature config: " + where + " needs min < max");
    } else {
        throw ValidationError("feature config: unknown dimension kind " + kind);
    }
    return d;
}

}  // namespace

FeatureConfig parse_feature_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("feature config: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("feature config: top level must be an object");
    FeatureConfig cfg;
    if (j.contains("dimensions")) {
        if (!j["dimensions"].is_array())
            throw ValidationError("feature config: dimensions must be an array");
        size_t i = 0;
        for (const auto& dj : j["dimensions"]) cfg.dimensions.push_back(dimension_from(dj, i++));
    }
    if (j.contains("quality_q")) cfg.quality_q = rational_from(j["quality_q"], "quality_q");
    if (j.contains("cost_bound")) {
        if (!j["cost_bound"].is_number_integer())
            throw ValidationError("feature config: cost_bound must be an integer");
        cfg.cost_bound = j["cost_bound"].get<long long>();
        if (*cfg.cost_bound < 0) throw ValidationError("feature config: cost_bound must be >= 0");
    }
    if (cfg.quality_q && cfg.cost_bound)
        throw ValidationError("feature config: quality_q and cost_bound are mutually exclusive");
    if (cfg.quality_q && cfg.quality_q->sign() <= 0)
        throw ValidationError("feature config: quality_q must be > 0");
    if (j.contains("soft_goals")) cfg.soft_goals = j["soft_goals"].get<bool>();
    if (j.contains("k")) {
        cfg.k = j["k"].get<long long>();
        if (*cfg.k < 1) throw ValidationError("feature config: k must be >= 1");
    }
    if (j.contains("utilities")) cfg.utilities = utilities_from(j["utilities"], "utilities");
    return cfg;
}

FeatureConfig parse_feature_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_feature_config(os.str());
}

}  // namespace bplan::pddl
