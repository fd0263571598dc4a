#include "bplan/dimensions.hpp"

#include <algorithm>
#include <set>

namespace bplan::dims {

using encode::EncodedTask;
using ground::GroundTask;
using ground::Plan;
using ground::StateTrace;
using pddl::DimensionKind;
using solver::BoolVar;
using solver::CmpOp;
using solver::f_and;
using solver::f_cmp;
using solver::f_false;
using solver::f_iff;
using solver::f_implies;
using solver::f_not;
using solver::f_or;
using solver::f_true;
using solver::f_var;
using solver::Formula;
using solver::LinearExpr;
using solver::NumVar;

bool BehaviourValue::operator<(const BehaviourValue& o) const {
    if (kind != o.kind) return kind < o.kind;
    switch (kind) {
        case Kind::Int: return integer < o.integer;
        case Kind::Rat: return rational < o.rational;
        default: return order < o.order;
    }
}

BehaviourSpace build_behaviour_space(const pddl::FeatureConfig& cfg, const GroundTask& task) {
    BehaviourSpace space;
    std::set<std::string> labels;
    for (const auto& spec : cfg.dimensions) {
        Dimension d;
        d.kind = spec.kind;
        d.label = pddl::dimension_kind_name(spec.kind);
        switch (spec.kind) {
            case DimensionKind::CostBound:
            case DimensionKind::GoalOrder:
                break;
            case DimensionKind::ResourceUtilisation: {
                d.resources = spec.resources;
                for (const auto& r : d.resources) {
                    bool known = false;
                    for (const auto& o : task.objects)
                        if (o.name == r) known = true;
                    if (!known)
                        throw DimensionError("resource " + r + " is not a problem object");
                }
                d.action_uses.resize(d.resources.size());
                for (size_t ri = 0; ri < d.resources.size(); ++ri) {
                    d.action_uses[ri].resize(task.actions.size(), false);
                    for (const auto& a : task.actions)
                        if (std::find(a.objects.begin(), a.objects.end(), d.resources[ri]) !=
                            a.objects.end())
                            d.action_uses[ri][a.id] = true;
                }
                break;
            }
            case DimensionKind::UtilityValue: {
                const auto& utilities = cfg.utilities_for(spec);
                d.utilities.assign(task.goal.size(), Rational(0));
                for (const auto& [name, value] : utilities) {
                    int atom = task.atom_id(name);
                    bool found = false;
                    for (size_t gi = 0; gi < task.goal.size(); ++gi)
                        if (task.goal[gi] == atom) {
                            d.utilities[gi] = value;
                            found = true;
                        }
                    if (!found)
                        throw DimensionError("utility key " + name + " is not a goal atom");
                }
                break;
            }
            case DimensionKind::NumericFluent: {
                d.fluent = task.fluent_id(spec.fluent);
                if (d.fluent < 0)
                    throw DimensionError("numeric dimension references unknown fluent " +
                                         spec.fluent);
                if (task.mode != pddl::Mode::Numeric)
                    throw DimensionError("numeric_fluent dimension on a " +
                                         pddl::mode_name(task.mode) + " task");
                d.min = spec.min;
                d.max = spec.max;
                d.epsilon = spec.epsilon;
                d.boxes = pddl::box_count(spec.min, spec.max, spec.epsilon);
                d.label += ":" + spec.fluent;
                break;
            }
        }
        if (!labels.insert(d.label).second)
            throw DimensionError("duplicate dimension " + d.label +
                                 " (kinds may repeat only for numeric_fluent)");
        space.dimensions.push_back(std::move(d));
    }
    return space;
}

namespace {

// PStep indicator bits for one goal atom: bits[0] is "never achieved" (-1),
// bits[i+1] is "first true at step i" for i in 0..n.
std::vector<BoolVar> encode_psteps(const Dimension&, EncodedTask& enc, int goal_atom,
                                   const std::string& prefix) {
    solver::Session& s = enc.session();
    const int n = enc.horizon();
    std::vector<BoolVar> never(n + 1);  // never[i]: atom false at steps 0..i
    for (int i = 0; i <= n; ++i) {
        never[i] = s.new_bool(prefix + "_nv" + std::to_string(i));
        Formula rhs = f_not(f_var(enc.atom_var(goal_atom, i)));
        if (i > 0) rhs = f_and(f_var(never[i - 1]), rhs);
        s.assert_formula(f_iff(f_var(never[i]), rhs));
    }
    std::vector<BoolVar> bits(n + 2);
    bits[0] = never[n];
    for (int i = 0; i <= n; ++i) {
        bits[i + 1] = s.new_bool(prefix + "_ps" + std::to_string(i));
        Formula first = f_var(enc.atom_var(goal_atom, i));
        if (i > 0) first = f_and(f_var(never[i - 1]), first);
        s.assert_formula(f_iff(f_var(bits[i + 1]), first));
    }
    return bits;
}

Formula unary_equals(const std::vector<BoolVar>& unary, long long v) {
    // unary[j-1] <-> value >= j; value == v <-> unary[v-1] and not unary[v]
    std::vector<Formula> parts;
    if (v > static_cast<long long>(unary.size())) return f_false();
    if (v >= 1) parts.push_back(f_var(unary[v - 1]));
    if (v < static_cast<long long>(unary.size())) parts.push_back(f_not(f_var(unary[v])));
    return f_and(parts);
}

long long unary_value(const std::vector<BoolVar>& unary, const solver::SolverModel& m) {
    long long v = 0;
    for (const auto& u : unary)
        if (m.bool_value(u)) ++v;
    return v;
}

}  // namespace

EncodedDimension encode_dimension(const Dimension& dim, EncodedTask& enc, long long cost_bound) {
    EncodedDimension out;
    out.dim = &dim;
    solver::Session& s = enc.session();
    const GroundTask& task = enc.task();
    const int n = enc.horizon();

    switch (dim.kind) {
        case DimensionKind::CostBound: {
            // cvalue = sum omega_i, asserted <= c; the omega indirection keeps
            // the counter over one bit per step rather than per action.
            std::vector<BoolVar> steps;
            for (int i = 0; i < n; ++i) steps.push_back(enc.step_active(i));
            out.unary = encode::unary_counter(s, steps, "cv");
            if (cost_bound < n && cost_bound + 1 <= static_cast<long long>(out.unary.size()))
                s.assert_formula(f_not(f_var(out.unary[cost_bound])));
            break;
        }
        case DimensionKind::ResourceUtilisation: {
            std::vector<BoolVar> used(dim.resources.size());
            for (size_t ri = 0; ri < dim.resources.size(); ++ri) {
                used[ri] = s.new_bool("used_" + dim.resources[ri]);
                std::vector<Formula> any;
                for (const auto& a : task.actions) {
                    if (!dim.action_uses[ri][a.id]) continue;
                    for (int i = 0; i < n; ++i) any.push_back(f_var(enc.action_var(a.id, i)));
                }
                s.assert_formula(f_iff(f_var(used[ri]), f_or(any)));
            }
            out.unary = encode::unary_counter(s, used, "ru");
            break;
        }
        case DimensionKind::GoalOrder: {
            const size_t g = task.goal.size();
            std::vector<std::vector<BoolVar>> psteps;
            for (size_t gi = 0; gi < g; ++gi)
                psteps.push_back(
                    encode_psteps(dim, enc, task.goal[gi], "go" + std::to_string(gi)));
            // ge[gi][v]: PStep(gi) >= value indexed by v (v=0 is -1, v=i+1 is step i).
            std::vector<std::vector<BoolVar>> ge(g);
            for (size_t gi = 0; gi < g; ++gi) {
                ge[gi].resize(n + 2);
                for (int v = n + 1; v >= 0; --v) {
                    ge[gi][v] = s.new_bool("ge" + std::to_string(gi) + "_" + std::to_string(v));
                    Formula rhs = f_var(psteps[gi][v]);
                    if (v < n + 1) rhs = f_or(rhs, f_var(ge[gi][v + 1]));
                    s.assert_formula(f_iff(f_var(ge[gi][v]), rhs));
                }
            }
            out.to.assign(g, std::vector<BoolVar>(g));
            for (size_t a = 0; a < g; ++a) {
                for (size_t b = 0; b < g; ++b) {
                    if (a == b) continue;
                    out.to[a][b] =
                        s.new_bool("to_" + std::to_string(a) + "_" + std::to_string(b));
                    // PStep(a) <= PStep(b): some value v with PStep(a)=v and PStep(b)>=v.
                    std::vector<Formula> cases;
                    for (int v = 0; v <= n + 1; ++v)
                        cases.push_back(f_and(f_var(psteps[a][v]), f_var(ge[b][v])));
                    s.assert_formula(f_iff(f_var(out.to[a][b]), f_or(cases)));
                }
            }
            break;
        }
        case DimensionKind::UtilityValue: {
            out.uv = s.new_num("uv", solver::NumKind::Real);
            LinearExpr sum(out.uv);
            for (size_t gi = 0; gi < task.goal.size(); ++gi) {
                if (dim.utilities[gi] == Rational(0)) continue;
                NumVar t = s.new_num("uv_t" + std::to_string(gi), solver::NumKind::Real);
                Formula achieved = f_var(enc.atom_var(task.goal[gi], n));
                s.assert_formula(
                    f_implies(achieved, f_cmp(LinearExpr(t), CmpOp::Eq, dim.utilities[gi])));
                s.assert_formula(
                    f_implies(f_not(achieved), f_cmp(LinearExpr(t), CmpOp::Eq, Rational(0))));
                sum.add(t, Rational(-1));
            }
            s.assert_formula(f_cmp(sum, CmpOp::Eq, Rational(0)));
            break;
        }
        case DimensionKind::NumericFluent: {
            NumVar fv = enc.fluent_var(dim.fluent, n);
            // Generated plans must land inside the configured range so the
            // behaviour is always defined.
            s.assert_formula(f_cmp(LinearExpr(fv), CmpOp::Ge, dim.min));
            s.assert_formula(f_cmp(LinearExpr(fv), CmpOp::Le, dim.max));
            out.box.resize(dim.boxes);
            for (long long j = 0; j < dim.boxes; ++j) {
                out.box[j] = s.new_bool(dim.label + "_box" + std::to_string(j));
                Rational lo = dim.min + Rational(j) * dim.epsilon;
                Formula lower = f_cmp(LinearExpr(fv), CmpOp::Ge, lo);
                Formula upper =
                    j + 1 == dim.boxes
                        ? f_cmp(LinearExpr(fv), CmpOp::Le, dim.max)
                        : f_cmp(LinearExpr(fv), CmpOp::Lt, dim.min + Rational(j + 1) * dim.epsilon);
                s.assert_formula(f_iff(f_var(out.box[j]), f_and(lower, upper)));
            }
            break;
        }
    }
    return out;
}

EncodedSpace encode_space(const BehaviourSpace& space, EncodedTask& enc, long long cost_bound) {
    EncodedSpace out;
    out.space = &space;
    for (const auto& d : space.dimensions)
        out.dimensions.push_back(encode_dimension(d, enc, cost_bound));
    return out;
}

BehaviourValue extract_dimension_value(const Dimension& dim, const GroundTask& task,
                                       const Plan& plan, const StateTrace& trace) {
    BehaviourValue v;
    switch (dim.kind) {
        case DimensionKind::CostBound:
            v.kind = BehaviourValue::Kind::Int;
            v.integer = static_cast<long long>(plan.actions.size());
            break;
        case DimensionKind::ResourceUtilisation: {
            v.kind = BehaviourValue::Kind::Int;
            long long used = 0;
            for (size_t ri = 0; ri < dim.resources.size(); ++ri) {
                bool hit = false;
                for (int a : plan.actions)
                    if (dim.action_uses[ri][a]) {
                        hit = true;
                        break;
                    }
                if (hit) ++used;
            }
            v.integer = used;
            break;
        }
        case DimensionKind::GoalOrder: {
            v.kind = BehaviourValue::Kind::Order;
            const size_t g = task.goal.size();
            std::vector<int> steps(g);
            for (size_t gi = 0; gi < g; ++gi)
                steps[gi] = first_achievement_step(trace, task.goal[gi]);
            v.order.assign(g * g, false);
            for (size_t a = 0; a < g; ++a)
                for (size_t b = 0; b < g; ++b)
                    v.order[a * g + b] = steps[a] <= steps[b];
            break;
        }
        case DimensionKind::UtilityValue: {
            v.kind = BehaviourValue::Kind::Rat;
            Rational total(0);
            const ground::State& last = trace.back();
            for (size_t gi = 0; gi < task.goal.size(); ++gi)
                if (last.atoms[task.goal[gi]]) total += dim.utilities[gi];
            v.rational = total;
            break;
        }
        case DimensionKind::NumericFluent: {
            v.kind = BehaviourValue::Kind::Int;
            const Rational& value = trace.back().fluents.at(dim.fluent);
            if (value < dim.min || value > dim.max)
                throw DimensionError("final value " + value.str() + " of " +
                                     task.fluent_names[dim.fluent] + " is outside [" +
                                     dim.min.str() + ", " + dim.max.str() + "]");
            if (value == dim.max)
                v.integer = dim.boxes - 1;
            else
                v.integer = ((value - dim.min) / dim.epsilon).floor();
            break;
        }
    }
    return v;
}

Behaviour plan_behaviour(const BehaviourSpace& space, const GroundTask& task, const Plan& plan,
                         const StateTrace& trace) {
    Behaviour b;
    for (const auto& d : space.dimensions)
        b.values.push_back(extract_dimension_value(d, task, plan, trace));
    return b;
}

Behaviour behaviour_from_model(const EncodedSpace& space, const EncodedTask& enc,
                               const solver::SolverModel& model) {
    Behaviour b;
    for (const auto& ed : space.dimensions) {
        BehaviourValue v;
        switch (ed.dim->kind) {
            case DimensionKind::CostBound:
            case DimensionKind::ResourceUtilisation:
                v.kind = BehaviourValue::Kind::Int;
                v.integer = unary_value(ed.unary, model);
                break;
            case DimensionKind::GoalOrder: {
                v.kind = BehaviourValue::Kind::Order;
                const size_t g = enc.task().goal.size();
                v.order.assign(g * g, false);
                for (size_t a = 0; a < g; ++a)
                    for (size_t bb = 0; bb < g; ++bb)
                        v.order[a * g + bb] =
                            a == bb ? true : model.bool_value(ed.to[a][bb]);
                break;
            }
            case DimensionKind::UtilityValue:
                v.kind = BehaviourValue::Kind::Rat;
                v.rational = model.num_value(ed.uv);
                break;
            case DimensionKind::NumericFluent: {
                v.kind = BehaviourValue::Kind::Int;
                long long hit = -1;
                for (size_t j = 0; j < ed.box.size(); ++j) {
                    if (model.bool_value(ed.box[j])) {
                        if (hit >= 0)
                            throw encode::EncodingBug("two boxes hold for " + ed.dim->label);
                        hit = static_cast<long long>(j);
                    }
                }
                if (hit < 0) throw encode::EncodingBug("no box holds for " + ed.dim->label);
                v.integer = hit;
                break;
            }
        }
        b.values.push_back(std::move(v));
    }
    return b;
}

void forbid_behaviour(EncodedTask& enc, EncodedSpace& space, const Behaviour& b) {
    if (b.values.size() != space.dimensions.size())
        throw DimensionError("behaviour arity does not match the space");
    std::vector<Formula> conjuncts;
    for (size_t di = 0; di < space.dimensions.size(); ++di) {
        const EncodedDimension& ed = space.dimensions[di];
        const BehaviourValue& v = b.values[di];
        switch (ed.dim->kind) {
            case DimensionKind::CostBound:
            case DimensionKind::ResourceUtilisation:
                conjuncts.push_back(unary_equals(ed.unary, v.integer));
                break;
            case DimensionKind::GoalOrder: {
                const size_t g = enc.task().goal.size();
                for (size_t a = 0; a < g; ++a)
                    for (size_t bb = 0; bb < g; ++bb) {
                        if (a == bb) continue;
                        Formula lit = f_var(ed.to[a][bb]);
                        conjuncts.push_back(v.order[a * g + bb] ? lit : f_not(lit));
                    }
                break;
            }
            case DimensionKind::UtilityValue:
                conjuncts.push_back(f_cmp(LinearExpr(ed.uv), CmpOp::Eq, v.rational));
                break;
            case DimensionKind::NumericFluent:
                if (v.integer < 0 || v.integer >= static_cast<long long>(ed.box.size()))
                    throw DimensionError("box index out of range in forbid_behaviour");
                conjuncts.push_back(f_var(ed.box[v.integer]));
                break;
        }
    }
    enc.session().assert_formula(f_not(f_and(conjuncts)));
    space.forbidden.push_back(b);
}

long long behaviour_count(const std::vector<Behaviour>& behaviours) {
    std::set<Behaviour> distinct(behaviours.begin(), behaviours.end());
    return static_cast<long long>(distinct.size());
}

int first_achievement_step(const StateTrace& trace, int atom) {
    for (size_t i = 0; i < trace.size(); ++i)
        if (trace[i].atoms[atom]) return static_cast<int>(i);
    return -1;
}

nlohmann::json behaviour_to_json(const BehaviourSpace& space, const GroundTask& task,
                                 const Behaviour& b) {
    nlohmann::json out = nlohmann::json::object();
    for (size_t di = 0; di < space.dimensions.size(); ++di) {
        const Dimension& d = space.dimensions[di];
        const BehaviourValue& v = b.values[di];
        switch (v.kind) {
            case BehaviourValue::Kind::Int: out[d.label] = v.integer; break;
            case BehaviourValue::Kind::Rat:
                out[d.label] = v.rational.is_integer()
                                   ? nlohmann::json(v.rational.to_integer())
                                   : nlohmann::json(v.rational.to_double());
                break;
            case BehaviourValue::Kind::Order: {
                const size_t g = task.goal.size();
                std::vector<std::string> pairs;
                for (size_t a = 0; a < g; ++a)
                    for (size_t bb = 0; bb < g; ++bb) {
                        if (a == bb || !v.order[a * g + bb]) continue;
                        pairs.push_back(task.atom_names[task.goal[a]] + "<=" +
                                        task.atom_names[task.goal[bb]]);
                    }
                std::sort(pairs.begin(), pairs.end());
                out[d.label] = pairs;
                break;
            }
        }
    }
    return out;
}

}  // namespace bplan::dims
