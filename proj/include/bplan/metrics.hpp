#ifndef BPLAN_METRICS_HPP
#define BPLAN_METRICS_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bplan/ground.hpp"

namespace bplan::metrics {

struct PlanInvalid : std::runtime_error {
    PlanInvalid(int step, const std::string& action, const std::string& why)
        : std::runtime_error("plan invalid at step " + std::to_string(step) + " (" + action +
                             "): " + why),
          step(step),
          action(action) {}
    explicit PlanInvalid(const std::string& why) : std::runtime_error(why), step(-1) {}
    int step;
    std::string action;
};

struct OracleCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Simulates the plan from init, checking applicability at every step and the
// goal at the end (goal check skipped in osp mode). Throws PlanInvalid.
ground::StateTrace validate_plan(const ground::GroundTask& task, const ground::Plan& plan);

// Unit action costs under the makespan assumption: cost = plan length.
long long compute_plan_cost(const ground::Plan& plan);

// Sum of utilities of goal atoms holding in the trace's final state.
Rational compute_utility(const ground::GroundTask& task, const ground::StateTrace& trace);

// 1 - Jaccard similarity of the two plans' action sets; 0 when both empty.
Rational stability_distance(const ground::Plan& a, const ground::Plan& b);

using DistanceFn = std::function<Rational(const ground::Plan&, const ground::Plan&)>;

// Sum of pairwise distances over unordered pairs.
Rational maxsum(const std::vector<ground::Plan>& plans, const DistanceFn& dist);

// Greedy subset selection: seeds with the pool's first plan, then repeatedly
// adds the plan maximising summed distance to the selected set (pool-order tie
// break). Returns indices into the pool.
std::vector<size_t> greedy_select(const std::vector<ground::Plan>& pool, size_t k,
                                  const DistanceFn& dist);

struct OracleOptions {
    size_t node_cap = 2000000;
};

// Depth-bounded DFS over action sequences from init: every sequence of length
// <= bound whose end state satisfies the goal, complete and duplicate-free, in
// lexicographic action-id order.
std::vector<ground::Plan> oracle_enumerate(const ground::GroundTask& task, int horizon,
                                           long long cost_bound,
                                           const OracleOptions& opts = {});

}  // namespace bplan::metrics

#endif
