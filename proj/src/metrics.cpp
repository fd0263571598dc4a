#include "bplan/metrics.hpp"

#include <algorithm>
#include <set>

namespace bplan::metrics {

using ground::GroundAction;
using ground::GroundTask;
using ground::Plan;
using ground::State;
using ground::StateTrace;

StateTrace validate_plan(const GroundTask& task, const Plan& plan) {
    StateTrace trace;
    trace.push_back(ground::initial_state(task));
    for (size_t i = 0; i < plan.actions.size(); ++i) {
        int aid = plan.actions[i];
        if (aid < 0 || aid >= static_cast<int>(task.actions.size()))
            throw PlanInvalid(static_cast<int>(i), "#" + std::to_string(aid),
                              "no such ground action");
        const GroundAction& a = task.actions[aid];
        const State& s = trace.back();
        for (int p : a.pre_pos)
            if (!s.atoms[p])
                throw PlanInvalid(static_cast<int>(i), a.name,
                                  "precondition " + task.atom_names[p] + " does not hold");
        for (int p : a.pre_neg)
            if (s.atoms[p])
                throw PlanInvalid(static_cast<int>(i), a.name,
                                  "negative precondition " + task.atom_names[p] + " violated");
        for (const auto& c : a.pre_num)
            if (!ground::holds(c, s))
                throw PlanInvalid(static_cast<int>(i), a.name, "numeric precondition violated");
        trace.push_back(ground::apply(task, s, a));
    }
    if (!ground::goal_satisfied(task, trace.back()))
        throw PlanInvalid("goal not satisfied in the final state");
    return trace;
}

long long compute_plan_cost(const Plan& plan) { return static_cast<long long>(plan.actions.size()); }

Rational compute_utility(const GroundTask& task, const StateTrace& trace) {
    Rational total(0);
    const State& last = trace.back();
    for (size_t i = 0; i < task.goal.size(); ++i)
        if (last.atoms[task.goal[i]]) total += task.goal_utilities[i];
    return total;
}

Rational stability_distance(const Plan& a, const Plan& b) {
    std::set<int> sa(a.actions.begin(), a.actions.end());
    std::set<int> sb(b.actions.begin(), b.actions.end());
    if (sa.empty() && sb.empty()) return Rational(0);
    long long common = 0;
    for (int x : sa)
        if (sb.count(x)) ++common;
    long long uni = static_cast<long long>(sa.size() + sb.size()) - common;
    return Rational(1) - Rational(common, uni);
}

Rational maxsum(const std::vector<Plan>& plans, const DistanceFn& dist) {
    Rational total(0);
    for (size_t i = 0; i < plans.size(); ++i)
        for (size_t j = i + 1; j < plans.size(); ++j) total += dist(plans[i], plans[j]);
    return total;
}

std::vector<size_t> greedy_select(const std::vector<Plan>& pool, size_t k,
                                  const DistanceFn& dist) {
    if (pool.empty()) throw std::invalid_argument("greedy_select: empty pool");
    if (k > pool.size()) throw std::invalid_argument("greedy_select: k exceeds pool size");
    std::vector<size_t> selected{0};
    std::vector<bool> in(pool.size(), false);
    in[0] = true;
    while (selected.size() < k) {
        size_t best = pool.size();
        Rational best_score(0);
        for (size_t i = 0; i < pool.size(); ++i) {
            if (in[i]) continue;
            Rational score(0);
            for (size_t j : selected) score += dist(pool[i], pool[j]);
            if (best == pool.size() || score > best_score) {
                best = i;
                best_score = score;
            }
        }
        selected.push_back(best);
        in[best] = true;
    }
    return selected;
}

namespace {

void oracle_dfs(const GroundTask& task, const State& s, std::vector<int>& prefix, int bound,
                size_t& nodes, size_t cap, std::vector<Plan>& out) {
    if (++nodes > cap) throw OracleCapExceeded("oracle enumeration exceeded the node cap");
    if (ground::goal_satisfied(task, s)) out.push_back(Plan{prefix});
    if (static_cast<int>(prefix.size()) >= bound) return;
    for (const auto& a : task.actions) {
        if (!ground::applicable(task, s, a)) continue;
        prefix.push_back(a.id);
        State next = ground::apply(task, s, a);
        oracle_dfs(task, next, prefix, bound, nodes, cap, out);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<Plan> oracle_enumerate(const GroundTask& task, int horizon, long long cost_bound,
                                   const OracleOptions& opts) {
    int bound = static_cast<int>(std::min<long long>(horizon, cost_bound));
    if (bound < 0) return {};
    std::vector<Plan> out;
    std::vector<int> prefix;
    size_t nodes = 0;
    State init = ground::initial_state(task);
    oracle_dfs(task, init, prefix, bound, nodes, opts.node_cap, out);
    return out;
}

}  // namespace bplan::metrics
