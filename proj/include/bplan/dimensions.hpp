#ifndef BPLAN_DIMENSIONS_HPP
#define BPLAN_DIMENSIONS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "bplan/encode.hpp"
#include "bplan/feature_config.hpp"
#include "bplan/ground.hpp"
#include "json.hpp"

namespace bplan::dims {

struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One behaviour-space axis, resolved against a ground task.
struct Dimension {
    pddl::DimensionKind kind;
    std::string label;  // unique within a space

    // resource_utilisation
    std::vector<std::string> resources;
    std::vector<std::vector<bool>> action_uses;  // [resource][action]

    // numeric_fluent
    int fluent = -1;
    Rational min, max, epsilon;
    long long boxes = 0;

    // utility_value: aligned with task.goal
    std::vector<Rational> utilities;
};

// Ordered list of dimensions (Cartesian product is the behaviour space).
struct BehaviourSpace {
    std::vector<Dimension> dimensions;
    bool empty() const { return dimensions.empty(); }
};

// Validates AddInfo against the task and resolves dimensions in config order.
BehaviourSpace build_behaviour_space(const pddl::FeatureConfig& cfg,
                                     const ground::GroundTask& task);

// One dimension value of a plan's behaviour.
struct BehaviourValue {
    enum class Kind { Int, Rat, Order };
    Kind kind = Kind::Int;
    long long integer = 0;
    Rational rational;
    std::vector<bool> order;  // |G| x |G| row-major, diagonal included (true)

    bool operator==(const BehaviourValue& o) const {
        return kind == o.kind && integer == o.integer && rational == o.rational &&
               order == o.order;
    }
    bool operator<(const BehaviourValue& o) const;
};

struct Behaviour {
    std::vector<BehaviourValue> values;
    bool operator==(const Behaviour& o) const { return values == o.values; }
    bool operator<(const Behaviour& o) const { return values < o.values; }
};

// Formula-side handles for one encoded dimension.
struct EncodedDimension {
    const Dimension* dim = nullptr;
    // cost_bound / resource_utilisation: unary[j-1] <-> value >= j
    std::vector<solver::BoolVar> unary;
    // goal_order: to[a][b] <-> PStep(g_a) <= PStep(g_b); diagonal unused
    std::vector<std::vector<solver::BoolVar>> to;
    // utility_value
    solver::NumVar uv;
    // numeric_fluent: box[j] <-> final value falls in box j
    std::vector<solver::BoolVar> box;
};

// Dimension encodings appended to one encoded task, with forbid bookkeeping.
struct EncodedSpace {
    const BehaviourSpace* space = nullptr;
    std::vector<EncodedDimension> dimensions;
    std::vector<Behaviour> forbidden;
};

// Appends the dimension's encoding to the task's formula and returns handles.
// cost_bound uses the given bound c (asserts cvalue <= c).
EncodedDimension encode_dimension(const Dimension& dim, encode::EncodedTask& enc,
                                  long long cost_bound);

EncodedSpace encode_space(const BehaviourSpace& space, encode::EncodedTask& enc,
                          long long cost_bound);

// The extracting functions (one per kind), computed from plan and trace.
BehaviourValue extract_dimension_value(const Dimension& dim, const ground::GroundTask& task,
                                       const ground::Plan& plan,
                                       const ground::StateTrace& trace);

Behaviour plan_behaviour(const BehaviourSpace& space, const ground::GroundTask& task,
                         const ground::Plan& plan, const ground::StateTrace& trace);

// Reads the behaviour off a model through the dimensions' formula handles.
Behaviour behaviour_from_model(const EncodedSpace& space, const encode::EncodedTask& enc,
                               const solver::SolverModel& model);

// Asserts that the formula's behaviour differs from b; records it.
void forbid_behaviour(encode::EncodedTask& enc, EncodedSpace& space, const Behaviour& b);

long long behaviour_count(const std::vector<Behaviour>& behaviours);

// First-achievement step of a goal atom in a trace: smallest index with the
// atom true (0 = already true initially), -1 when never true.
int first_achievement_step(const ground::StateTrace& trace, int atom);

// JSON: integers/rationals as numbers, goal order as sorted "a<=b" strings.
nlohmann::json behaviour_to_json(const BehaviourSpace& space, const ground::GroundTask& task,
                                 const Behaviour& b);

}  // namespace bplan::dims

#endif
