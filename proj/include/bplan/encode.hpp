#ifndef BPLAN_ENCODE_HPP
#define BPLAN_ENCODE_HPP

#include <stdexcept>
#include <vector>

#include "bplan/ground.hpp"
#include "bplan/solver.hpp"

namespace bplan::encode {

// Internal inconsistency between a model and the encoding's guarantees.
struct EncodingBug : std::logic_error {
    using std::logic_error::logic_error;
};

struct HorizonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EncodeOptions {
    int horizon_cap = 500;
    // Assert at least one action per step: the formula then encodes plans of
    // exactly n actions (used by the optimal-length search).
    bool exact_makespan = false;
};

// The step-indexed formula over a solver session, with the variable maps
// needed to read plans and traces back out of models. Steps may be empty;
// frame axioms then carry the state, so any plan of length <= n fits.
class EncodedTask {
public:
    EncodedTask(const ground::GroundTask& task, int horizon, solver::Session& session,
                const EncodeOptions& opts);

    const ground::GroundTask& task() const { return *task_; }
    solver::Session& session() const { return *session_; }
    int horizon() const { return horizon_; }
    bool numeric() const { return !fluent_vars_.empty(); }

    solver::BoolVar action_var(int action, int step) const {
        return action_vars_[step][action];
    }
    solver::BoolVar atom_var(int atom, int step) const { return atom_vars_[step][atom]; }
    solver::NumVar fluent_var(int fluent, int step) const { return fluent_vars_[step][fluent]; }
    // omega_i: true iff some action is selected at step i.
    solver::BoolVar step_active(int step) const { return omega_[step]; }

private:
    void build(const EncodeOptions& opts);

    const ground::GroundTask* task_;
    solver::Session* session_;
    int horizon_;
    std::vector<std::vector<solver::BoolVar>> action_vars_;  // [step][action]
    std::vector<std::vector<solver::BoolVar>> atom_vars_;    // [step][atom]
    std::vector<std::vector<solver::NumVar>> fluent_vars_;   // [step][fluent]
    std::vector<solver::BoolVar> omega_;
};

inline EncodedTask encode_task(const ground::GroundTask& task, int horizon,
                               solver::Session& session, const EncodeOptions& opts = {}) {
    return EncodedTask(task, horizon, session, opts);
}

// Step-indexed selection: one entry per step, action id or -1 for empty.
std::vector<int> extract_step_assignment(const solver::SolverModel& model,
                                         const EncodedTask& enc);

// Selected actions ordered by step, empty steps skipped.
ground::Plan extract_plan(const solver::SolverModel& model, const EncodedTask& enc);

// Atom/fluent values per step, cross-checked against simulating the selected
// actions from init; any mismatch throws EncodingBug.
ground::StateTrace reconstruct_trace(const solver::SolverModel& model, const EncodedTask& enc);

// Unary "at least j" counter over the given literals-as-variables; output[j-1]
// is true iff at least j of the inputs are true. Shared by the cost and
// resource dimensions.
std::vector<solver::BoolVar> unary_counter(solver::Session& session,
                                           const std::vector<solver::BoolVar>& inputs,
                                           const std::string& prefix);

}  // namespace bplan::encode

#endif
