#include "bplan/planner.hpp"

#include <algorithm>

#include "bplan/metrics.hpp"

namespace bplan::planner {

using ground::GroundTask;
using ground::Plan;
using solver::CheckResult;
using solver::f_and;
using solver::f_not;
using solver::f_or;
using solver::f_var;
using solver::Formula;

namespace {
using Clock = std::chrono::steady_clock;

long long ms_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}
}  // namespace

LengthSearchResult find_optimal_length(const GroundTask& task, int max_horizon,
                                       const solver::SolverConfig& solver_cfg,
                                       BudgetClock& clock) {
    for (int n = 0; n <= max_horizon; ++n) {
        if (clock.expired()) return {LengthSearchResult::Status::Budget, -1};
        auto session = solver::make_session(solver_cfg);
        encode::EncodeOptions opts;
        opts.exact_makespan = true;
        encode::encode_task(task, n, *session, opts);
        CheckResult r = session->check_sat(clock.remaining());
        if (r == CheckResult::Sat) return {LengthSearchResult::Status::Found, n};
        if (r == CheckResult::Unknown) return {LengthSearchResult::Status::Budget, -1};
    }
    return {LengthSearchResult::Status::Exhausted, -1};
}

long long compute_cost_bound(const Rational& q, long long optimal_length) {
    return (q * Rational(optimal_length)).round_half_away();
}

// ---------------------------------------------------------------------------
BehaviourGenerator::BehaviourGenerator(const GroundTask& task, const dims::BehaviourSpace& space,
                                       int horizon, long long cost_bound,
                                       const solver::SolverConfig& cfg)
    : task_(task), space_(space), session_(solver::make_session(cfg)) {
    enc_ = std::make_unique<encode::EncodedTask>(task, horizon, *session_, encode::EncodeOptions{});
    space_enc_ = dims::encode_space(space, *enc_, cost_bound);
}

std::optional<PlanEntry> BehaviourGenerator::next(const solver::Budget& budget) {
    Clock::time_point start = Clock::now();
    CheckResult r = session_->check_sat(budget);
    if (r == CheckResult::Unknown) {
        stop_ = StopReason::Budget;
        return std::nullopt;
    }
    if (r == CheckResult::Unsat) {
        stop_ = StopReason::Exhausted;
        return std::nullopt;
    }
    solver::SolverModel model = session_->get_model();
    PlanEntry entry;
    entry.plan = encode::extract_plan(model, *enc_);
    entry.slots = encode::extract_step_assignment(model, *enc_);
    ground::StateTrace trace = encode::reconstruct_trace(model, *enc_);
    entry.behaviour = dims::plan_behaviour(space_, task_, entry.plan, trace);
    // The encoding/extraction agreement is a hard guarantee; a divergence
    // here is an encoding defect, not a degraded answer.
    dims::Behaviour from_model = dims::behaviour_from_model(space_enc_, *enc_, model);
    if (!(from_model == entry.behaviour))
        throw encode::EncodingBug("dimension expression value differs from extraction");
    dims::forbid_behaviour(*enc_, space_enc_, entry.behaviour);
    entry.phase = 'b';
    entry.found_ms = ms_since(start);
    stop_ = StopReason::Complete;
    return entry;
}

// ---------------------------------------------------------------------------
PlanGenerator::PlanGenerator(const GroundTask& task, int horizon,
                             const solver::SolverConfig& cfg)
    : task_(task), session_(solver::make_session(cfg)) {
    enc_ = std::make_unique<encode::EncodedTask>(task, horizon, *session_, encode::EncodeOptions{});
}

void PlanGenerator::forbid_assignment(const std::vector<int>& slots) {
    // Negation of the exact step-indexed assignment: some step differs. An
    // empty step differs when any action is selected there (omega).
    std::vector<Formula> differs;
    for (int i = 0; i < enc_->horizon(); ++i) {
        if (slots[i] < 0)
            differs.push_back(f_var(enc_->step_active(i)));
        else
            differs.push_back(f_not(f_var(enc_->action_var(slots[i], i))));
    }
    session_->assert_formula(f_or(differs));
}

std::optional<PlanEntry> PlanGenerator::next(const std::vector<Plan>& known,
                                             const solver::Budget& budget) {
    Clock::time_point start = Clock::now();
    for (;;) {
        CheckResult r = session_->check_sat(budget);
        if (r == CheckResult::Unknown) {
            stop_ = StopReason::Budget;
            return std::nullopt;
        }
        if (r == CheckResult::Unsat) {
            stop_ = StopReason::Exhausted;
            return std::nullopt;
        }
        solver::SolverModel model = session_->get_model();
        PlanEntry entry;
        entry.plan = encode::extract_plan(model, *enc_);
        entry.slots = encode::extract_step_assignment(model, *enc_);
        encode::reconstruct_trace(model, *enc_);  // internal consistency check
        forbid_assignment(entry.slots);
        // Padding variants of known sequences are generable by design; they
        // are filtered here so only sequence-novel plans are returned.
        if (std::find(known.begin(), known.end(), entry.plan) != known.end()) continue;
        entry.phase = 'p';
        entry.found_ms = ms_since(start);
        stop_ = StopReason::Complete;
        return entry;
    }
}

// ---------------------------------------------------------------------------
FbiResult fbi(const GroundTask& task, const dims::BehaviourSpace& space, long long k,
              const FbiOptions& opts) {
    FbiResult out;
    Clock::time_point phase_start = Clock::now();
    BudgetClock no_budget;
    BudgetClock& clock = opts.clock ? *opts.clock : no_budget;

    BehaviourGenerator gen(task, space, opts.horizon, opts.cost_bound, opts.solver);
    out.stop = StopReason::Exhausted;
    while (static_cast<long long>(out.plans.size()) < k) {
        if (clock.expired()) {
            out.stop = StopReason::Budget;
            break;
        }
        auto entry = gen.next(clock.remaining());
        if (!entry) {
            out.stop = gen.last_stop();
            break;
        }
        out.plans.push_back(std::move(*entry));
        if (static_cast<long long>(out.plans.size()) == k) {
            out.stop = StopReason::Complete;
            break;
        }
    }
    out.behaviour_count = static_cast<long long>(out.plans.size());
    out.behaviour_phase_ms = ms_since(phase_start);
    return out;
}

FbiResult fbi_k(const GroundTask& task, const dims::BehaviourSpace& space, long long k,
                const FbiOptions& opts) {
    FbiResult out = fbi(task, space, k, opts);
    if (out.stop != StopReason::Exhausted || static_cast<long long>(out.plans.size()) >= k)
        return out;

    Clock::time_point phase_start = Clock::now();
    BudgetClock no_budget;
    BudgetClock& clock = opts.clock ? *opts.clock : no_budget;

    // Alg. 4 line 2: plain phi_n in a fresh session, no dimension encodings;
    // phase-1 plans are re-forbidden as step assignments.
    PlanGenerator gen(task, opts.horizon, opts.solver);
    std::vector<Plan> known;
    for (const auto& e : out.plans) {
        gen.forbid_assignment(e.slots);
        known.push_back(e.plan);
    }
    out.stop = StopReason::Exhausted;
    while (static_cast<long long>(out.plans.size()) < k) {
        if (clock.expired()) {
            out.stop = StopReason::Budget;
            break;
        }
        auto entry = gen.next(known, clock.remaining());
        if (!entry) {
            out.stop = gen.last_stop();
            break;
        }
        // Behaviours of plan-phase plans are still reported (Def. 4 applies
        // to the whole set); they can only repeat phase-1 behaviours.
        ground::StateTrace trace = metrics::validate_plan(task, entry->plan);
        entry->behaviour = dims::plan_behaviour(space, task, entry->plan, trace);
        known.push_back(entry->plan);
        out.plans.push_back(std::move(*entry));
        if (static_cast<long long>(out.plans.size()) == k) {
            out.stop = StopReason::Complete;
            break;
        }
    }
    out.plan_phase_ms = ms_since(phase_start);
    return out;
}

}  // namespace bplan::planner
