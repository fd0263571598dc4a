#include "bplan/encode.hpp"

#include <string>

namespace bplan::encode {

using ground::GroundAction;
using ground::GroundTask;
using solver::BoolVar;
using solver::CmpOp;
using solver::f_and;
using solver::f_cmp;
using solver::f_iff;
using solver::f_implies;
using solver::f_not;
using solver::f_or;
using solver::f_var;
using solver::Formula;
using solver::LinearExpr;
using solver::NumVar;

EncodedTask::EncodedTask(const GroundTask& task, int horizon, solver::Session& session,
                         const EncodeOptions& opts)
    : task_(&task), session_(&session), horizon_(horizon) {
    if (horizon < 0) throw std::invalid_argument("negative horizon");
    if (horizon > opts.horizon_cap)
        throw HorizonError("horizon " + std::to_string(horizon) + " exceeds cap " +
                           std::to_string(opts.horizon_cap));
    build(opts);
}

namespace {

// expr over the fluent variables of one step.
LinearExpr at_step(const ground::LinExpr& e, const std::vector<NumVar>& fluents) {
    LinearExpr out(e.constant);
    for (const auto& [f, c] : e.terms) out.add(fluents[f], c);
    return out;
}

CmpOp cmp_op(pddl::RelOp op) {
    switch (op) {
        case pddl::RelOp::Lt: return CmpOp::Lt;
        case pddl::RelOp::Le: return CmpOp::Le;
        case pddl::RelOp::Eq: return CmpOp::Eq;
        case pddl::RelOp::Ge: return CmpOp::Ge;
        default: return CmpOp::Gt;
    }
}

}  // namespace

void EncodedTask::build(const EncodeOptions& opts) {
    const GroundTask& task = *task_;
    solver::Session& s = *session_;
    const int n = horizon_;
    const int num_actions = static_cast<int>(task.actions.size());
    const int num_atoms = static_cast<int>(task.atom_names.size());
    const int num_fluents = static_cast<int>(task.fluent_names.size());

    atom_vars_.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        atom_vars_[i].resize(num_atoms);
        for (int p = 0; p < num_atoms; ++p)
            atom_vars_[i][p] = s.new_bool("p" + std::to_string(p) + "@" + std::to_string(i));
    }
    if (num_fluents > 0) {
        fluent_vars_.resize(n + 1);
        for (int i = 0; i <= n; ++i) {
            fluent_vars_[i].resize(num_fluents);
            for (int f = 0; f < num_fluents; ++f)
                fluent_vars_[i][f] =
                    s.new_num("f" + std::to_string(f) + "@" + std::to_string(i),
                              solver::NumKind::Real);
        }
    }
    action_vars_.resize(n);
    omega_.resize(n);
    for (int i = 0; i < n; ++i) {
        action_vars_[i].resize(num_actions);
        for (int a = 0; a < num_actions; ++a)
            action_vars_[i][a] = s.new_bool("a" + std::to_string(a) + "@" + std::to_string(i));
        omega_[i] = s.new_bool("omega@" + std::to_string(i));
    }

    // Initial state.
    for (int p = 0; p < num_atoms; ++p)
        s.assert_formula(task.init[p] ? f_var(atom_vars_[0][p]) : f_not(f_var(atom_vars_[0][p])));
    for (int f = 0; f < num_fluents; ++f)
        s.assert_formula(
            f_cmp(LinearExpr(fluent_vars_[0][f]), CmpOp::Eq, task.fluent_init[f]));

    // Achievers/destroyers and updaters, indexed per atom/fluent.
    std::vector<std::vector<int>> adders(num_atoms), deleters(num_atoms);
    std::vector<std::vector<int>> updaters(num_fluents);
    for (const auto& a : task.actions) {
        for (int p : a.add) adders[p].push_back(a.id);
        for (int p : a.del) deleters[p].push_back(a.id);
        for (const auto& u : a.updates) updaters[u.fluent].push_back(a.id);
    }

    for (int i = 0; i < n; ++i) {
        const auto& sel = action_vars_[i];

        // omega_i <-> some action selected at i.
        std::vector<Formula> any;
        any.reserve(num_actions);
        for (int a = 0; a < num_actions; ++a) any.push_back(f_var(sel[a]));
        s.assert_formula(f_iff(f_var(omega_[i]), f_or(any)));
        if (opts.exact_makespan) s.assert_formula(f_var(omega_[i]));

        // At most one action per step (sequential encoding).
        if (num_actions > 1) {
            std::vector<BoolVar> chain(num_actions - 1);
            for (int a = 0; a + 1 < num_actions; ++a)
                chain[a] = s.new_bool("amo" + std::to_string(a) + "@" + std::to_string(i));
            for (int a = 0; a + 1 < num_actions; ++a) {
                s.assert_formula(f_implies(f_var(sel[a]), f_var(chain[a])));
                if (a > 0)
                    s.assert_formula(f_implies(f_var(chain[a - 1]), f_var(chain[a])));
                Formula blocked = a > 0 ? f_or(f_var(chain[a - 1]), f_var(sel[a]))
                                        : f_var(sel[a]);
                s.assert_formula(f_implies(blocked, f_not(f_var(sel[a + 1]))));
            }
        }

        // Preconditions and effects.
        for (const auto& a : task.actions) {
            Formula sa = f_var(sel[a.id]);
            for (int p : a.pre_pos) s.assert_formula(f_implies(sa, f_var(atom_vars_[i][p])));
            for (int p : a.pre_neg)
                s.assert_formula(f_implies(sa, f_not(f_var(atom_vars_[i][p]))));
            for (const auto& c : a.pre_num)
                s.assert_formula(
                    f_implies(sa, f_cmp(at_step(c.expr, fluent_vars_[i]), cmp_op(c.op),
                                        Rational(0))));
            for (int p : a.add) s.assert_formula(f_implies(sa, f_var(atom_vars_[i + 1][p])));
            for (int p : a.del)
                s.assert_formula(f_implies(sa, f_not(f_var(atom_vars_[i + 1][p]))));
            for (const auto& u : a.updates) {
                // next = value (assign) | current +/- value (increase/decrease),
                // with the value expression read at step i.
                LinearExpr rhs = at_step(u.value, fluent_vars_[i]);
                LinearExpr lhs(fluent_vars_[i + 1][u.fluent]);
                if (u.kind == pddl::UpdateKind::Increase)
                    rhs.add(fluent_vars_[i][u.fluent], Rational(1));
                else if (u.kind == pddl::UpdateKind::Decrease) {
                    rhs = rhs.scaled(Rational(-1));
                    rhs.add(fluent_vars_[i][u.fluent], Rational(1));
                }
                s.assert_formula(f_implies(sa, f_cmp(lhs - rhs, CmpOp::Eq, Rational(0))));
            }
        }

        // Explanatory frame axioms for atoms.
        for (int p = 0; p < num_atoms; ++p) {
            std::vector<Formula> add_sel, del_sel;
            for (int a : adders[p]) add_sel.push_back(f_var(sel[a]));
            for (int a : deleters[p]) del_sel.push_back(f_var(sel[a]));
            s.assert_formula(f_implies(
                f_and(f_not(f_var(atom_vars_[i][p])), f_var(atom_vars_[i + 1][p])),
                f_or(add_sel)));
            s.assert_formula(f_implies(
                f_and(f_var(atom_vars_[i][p]), f_not(f_var(atom_vars_[i + 1][p]))),
                f_or(del_sel)));
        }

        // Fluents persist unless some updater is selected.
        for (int f = 0; f < num_fluents; ++f) {
            std::vector<Formula> upd;
            for (int a : updaters[f]) upd.push_back(f_var(sel[a]));
            LinearExpr diff(fluent_vars_[i + 1][f]);
            diff.add(fluent_vars_[i][f], Rational(-1));
            s.assert_formula(
                f_implies(f_not(f_or(upd)), f_cmp(diff, CmpOp::Eq, Rational(0))));
        }
    }

    // Goal at the final step (empty steps make this equivalent to "at some
    // step k <= n"); osp mode has no hard goal.
    if (task.mode != pddl::Mode::Osp)
        for (int g : task.goal) s.assert_formula(f_var(atom_vars_[n][g]));
}

std::vector<int> extract_step_assignment(const solver::SolverModel& model,
                                         const EncodedTask& enc) {
    std::vector<int> slots(enc.horizon(), -1);
    const int num_actions = static_cast<int>(enc.task().actions.size());
    for (int i = 0; i < enc.horizon(); ++i) {
        for (int a = 0; a < num_actions; ++a) {
            if (model.bool_value(enc.action_var(a, i))) {
                if (slots[i] >= 0)
                    throw EncodingBug("two actions selected at step " + std::to_string(i));
                slots[i] = a;
            }
        }
    }
    return slots;
}

ground::Plan extract_plan(const solver::SolverModel& model, const EncodedTask& enc) {
    ground::Plan plan;
    for (int a : extract_step_assignment(model, enc))
        if (a >= 0) plan.actions.push_back(a);
    return plan;
}

ground::StateTrace reconstruct_trace(const solver::SolverModel& model, const EncodedTask& enc) {
    const GroundTask& task = enc.task();
    const int n = enc.horizon();
    const int num_atoms = static_cast<int>(task.atom_names.size());
    const int num_fluents = static_cast<int>(task.fluent_names.size());

    ground::StateTrace trace(n + 1);
    for (int i = 0; i <= n; ++i) {
        trace[i].atoms.resize(num_atoms);
        for (int p = 0; p < num_atoms; ++p) trace[i].atoms[p] = model.bool_value(enc.atom_var(p, i));
        trace[i].fluents.resize(num_fluents);
        for (int f = 0; f < num_fluents; ++f)
            trace[i].fluents[f] = model.num_value(enc.fluent_var(f, i));
    }

    // The trace must equal the stepwise simulation of the selected actions.
    std::vector<int> slots = extract_step_assignment(model, enc);
    ground::State sim = ground::initial_state(task);
    if (!(trace[0] == sim)) throw EncodingBug("trace step 0 differs from the initial state");
    for (int i = 0; i < n; ++i) {
        if (slots[i] >= 0) {
            const GroundAction& a = task.actions[slots[i]];
            if (!ground::applicable(task, sim, a))
                throw EncodingBug("model selects inapplicable action " + a.name + " at step " +
                                  std::to_string(i));
            sim = ground::apply(task, sim, a);
        }
        if (!(trace[i + 1] == sim))
            throw EncodingBug("trace step " + std::to_string(i + 1) +
                              " differs from simulation");
    }
    return trace;
}

std::vector<BoolVar> unary_counter(solver::Session& s, const std::vector<BoolVar>& inputs,
                                   const std::string& prefix) {
    const int n = static_cast<int>(inputs.size());
    if (n == 0) return {};
    // at_least[i][j-1] <-> at least j true among inputs[0..i]
    std::vector<std::vector<BoolVar>> at_least(n);
    for (int i = 0; i < n; ++i) {
        at_least[i].resize(i + 1);
        for (int j = 1; j <= i + 1; ++j)
            at_least[i][j - 1] =
                s.new_bool(prefix + "_c" + std::to_string(i) + "_" + std::to_string(j));
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 1; j <= i + 1; ++j) {
            Formula carry = (i >= 1 && j <= i) ? f_var(at_least[i - 1][j - 1]) : solver::f_false();
            Formula prefix_has_j1 = j == 1 ? solver::f_true()
                                   : i >= 1 ? f_var(at_least[i - 1][j - 2])
                                            : solver::f_false();
            Formula rhs = f_or(carry, f_and(prefix_has_j1, f_var(inputs[i])));
            s.assert_formula(f_iff(f_var(at_least[i][j - 1]), rhs));
        }
    }
    return at_least[n - 1];
}

}  // namespace bplan::encode
