#ifndef BPLAN_PLANNER_HPP
#define BPLAN_PLANNER_HPP

#include <chrono>
#include <memory>
#include <optional>

#include "bplan/dimensions.hpp"
#include "bplan/encode.hpp"
#include "bplan/ground.hpp"
#include "bplan/solver.hpp"

namespace bplan::planner {

// Shared wall-clock/memory budget across a planning run; each solver call
// receives whatever is left.
class BudgetClock {
public:
    BudgetClock() = default;
    BudgetClock(double wall_seconds, size_t memory_mb) : memory_mb_(memory_mb) {
        if (wall_seconds > 0)
            deadline_ = std::chrono::steady_clock::now() +
                        std::chrono::milliseconds(static_cast<long long>(wall_seconds * 1000));
    }

    bool expired() const {
        return deadline_ && std::chrono::steady_clock::now() >= *deadline_;
    }

    solver::Budget remaining() const {
        solver::Budget b;
        if (deadline_) {
            auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                *deadline_ - std::chrono::steady_clock::now());
            b.wall = left.count() > 0 ? left : std::chrono::milliseconds(0);
        }
        if (memory_mb_ > 0) b.memory_mb = memory_mb_;
        return b;
    }

private:
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    size_t memory_mb_ = 0;
};

enum class StopReason { Complete, Exhausted, Budget };

struct LengthSearchResult {
    enum class Status { Found, Exhausted, Budget } status;
    int length = -1;  // valid when Found
};

// Least n such that a plan of exactly n steps exists, testing phi_0, phi_1,
// ... with a fresh session per horizon and non-empty steps asserted.
LengthSearchResult find_optimal_length(const ground::GroundTask& task, int max_horizon,
                                       const solver::SolverConfig& solver_cfg,
                                       BudgetClock& clock);

// c = round(q*l), rounding half away from zero.
long long compute_cost_bound(const Rational& q, long long optimal_length);

struct PlanEntry {
    ground::Plan plan;
    std::vector<int> slots;  // step-indexed assignment, -1 for empty steps
    dims::Behaviour behaviour;
    char phase = 'b';  // 'b' behaviour phase, 'p' plan phase
    long long found_ms = 0;
};

// Alg.-3 style generator: the session holds phi'_n (task + dimensions); each
// successful call forbids the found behaviour before returning.
class BehaviourGenerator {
public:
    BehaviourGenerator(const ground::GroundTask& task, const dims::BehaviourSpace& space,
                       int horizon, long long cost_bound, const solver::SolverConfig& cfg);

    // none on exhaustion or budget; see last_stop().
    std::optional<PlanEntry> next(const solver::Budget& budget);
    StopReason last_stop() const { return stop_; }
    dims::EncodedSpace& encoded_space() { return space_enc_; }
    encode::EncodedTask& encoded_task() { return *enc_; }

private:
    const ground::GroundTask& task_;
    const dims::BehaviourSpace& space_;
    std::unique_ptr<solver::Session> session_;
    std::unique_ptr<encode::EncodedTask> enc_;
    dims::EncodedSpace space_enc_;
    StopReason stop_ = StopReason::Complete;
};

// Alg.-4 style generator: a fresh session holding plain phi_n; forbids exact
// step-indexed assignments, returns only sequence-novel plans.
class PlanGenerator {
public:
    PlanGenerator(const ground::GroundTask& task, int horizon,
                  const solver::SolverConfig& cfg);

    // known: all plans already emitted anywhere (their sequences are excluded).
    std::optional<PlanEntry> next(const std::vector<ground::Plan>& known,
                                  const solver::Budget& budget);
    StopReason last_stop() const { return stop_; }

    // Excludes one step-indexed assignment from future models.
    void forbid_assignment(const std::vector<int>& slots);

private:
    const ground::GroundTask& task_;
    std::unique_ptr<solver::Session> session_;
    std::unique_ptr<encode::EncodedTask> enc_;
    StopReason stop_ = StopReason::Complete;
};

struct FbiOptions {
    int horizon;            // formula length n (= cost bound for diverse generation)
    long long cost_bound;   // c
    solver::SolverConfig solver;
    BudgetClock* clock = nullptr;  // optional shared budget
};

struct FbiResult {
    std::vector<PlanEntry> plans;
    long long behaviour_count = 0;
    StopReason stop = StopReason::Complete;
    long long behaviour_phase_ms = 0;
    long long plan_phase_ms = 0;
};

// Alg. 1: accumulate one plan per new behaviour until k or exhaustion.
FbiResult fbi(const ground::GroundTask& task, const dims::BehaviourSpace& space, long long k,
              const FbiOptions& opts);

// Alg. 2: fbi, then plain plan-forbidding to top up to k plans.
FbiResult fbi_k(const ground::GroundTask& task, const dims::BehaviourSpace& space, long long k,
                const FbiOptions& opts);

}  // namespace bplan::planner

#endif
