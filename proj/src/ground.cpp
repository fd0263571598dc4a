#include "bplan/ground.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace bplan::ground {

using pddl::Atom;
using pddl::Mode;
using pddl::RelOp;
using pddl::UpdateKind;

void LinExpr::add_term(int fluent, const Rational& coeff) {
    for (auto& [f, c] : terms) {
        if (f == fluent) {
            c += coeff;
            if (c == Rational(0))
                terms.erase(std::remove_if(terms.begin(), terms.end(),
                                           [&](const auto& t) { return t.first == fluent; }),
                            terms.end());
            return;
        }
    }
    if (coeff == Rational(0)) return;
    terms.push_back({fluent, coeff});
    std::sort(terms.begin(), terms.end());
}

LinExpr LinExpr::scaled(const Rational& by) const {
    LinExpr out;
    if (by == Rational(0)) return out;
    out.constant = constant * by;
    for (const auto& [f, c] : terms) out.terms.push_back({f, c * by});
    return out;
}

LinExpr LinExpr::plus(const LinExpr& o) const {
    LinExpr out = *this;
    out.constant += o.constant;
    for (const auto& [f, c] : o.terms) out.add_term(f, c);
    return out;
}

namespace {

std::string ground_name(const std::string& head, const std::vector<std::string>& args) {
    return pddl::atom_name(Atom{head, args});
}

// Substitution of schema parameters by objects.
using Binding = std::map<std::string, std::string>;

Atom substitute(const Atom& a, const Binding& b) {
    Atom out;
    out.pred = a.pred;
    out.args.reserve(a.args.size());
    for (const auto& arg : a.args) {
        if (!arg.empty() && arg[0] == '?') {
            out.args.push_back(b.at(arg));
        } else {
            out.args.push_back(arg);
        }
    }
    return out;
}

class Grounder {
public:
    Grounder(const pddl::DomainModel& dom, const pddl::ProblemModel& prob,
             const GroundOptions& opts)
        : dom_(dom), prob_(prob), opts_(opts) {}

    GroundTask run() {
        collect_static_symbols();
        collect_init();
        instantiate_all();
        prune_unreachable();
        renumber();
        task_.mode = prob_.mode;
        task_.objects = prob_.objects;
        task_.goal_utilities.assign(task_.goal.size(), Rational(0));
        return std::move(task_);
    }

private:
    // A predicate is static when no schema ever adds or deletes it; a fluent
    // symbol is static when no schema updates it.
    void collect_static_symbols() {
        for (const auto& s : dom_.schemas) {
            for (const auto& a : s.add) dynamic_preds_.insert(a.pred);
            for (const auto& a : s.del) dynamic_preds_.insert(a.pred);
            for (const auto& u : s.num_effects) dynamic_fluents_.insert(u.fluent);
        }
    }

    void collect_init() {
        for (const auto& a : prob_.init_atoms) init_atoms_.insert(pddl::atom_name(a));
        for (const auto& [f, v] : prob_.init_fluents) init_fluents_[pddl::atom_name(f)] = v;
    }

    int atom_id(const Atom& ground) {
        std::string name = pddl::atom_name(ground);
        auto it = atom_ids_.find(name);
        if (it != atom_ids_.end()) return it->second;
        int id = static_cast<int>(atom_names_.size());
        atom_names_.push_back(name);
        atom_ids_.emplace(std::move(name), id);
        return id;
    }

    int fluent_ref(const std::string& name) {
        auto it = fluent_ids_.find(name);
        if (it != fluent_ids_.end()) return it->second;
        auto iv = init_fluents_.find(name);
        if (iv == init_fluents_.end())
            throw pddl::ValidationError("fluent " + name + " is used but has no initial value");
        int id = static_cast<int>(fluent_names_.size());
        fluent_names_.push_back(name);
        fluent_ids_.emplace(name, id);
        return id;
    }

    // Folds a template numeric expression under a binding into a linear
    // expression over dynamic ground fluents; statics become constants.
    LinExpr fold(const pddl::NumExpr& e, const Binding& b) {
        using K = pddl::NumExpr::Kind;
        LinExpr out;
        switch (e.kind) {
            case K::Constant: out.constant = e.constant; return out;
            case K::Fluent: {
                Atom ga = substitute(Atom{e.fluent, e.args}, b);
                std::string name = pddl::atom_name(ga);
                if (!dynamic_fluents_.count(e.fluent)) {
                    auto it = init_fluents_.find(name);
                    if (it == init_fluents_.end())
                        throw pddl::ValidationError("fluent " + name +
                                                    " is used but has no initial value");
                    out.constant = it->second;
                    return out;
                }
                out.add_term(fluent_ref(name), Rational(1));
                return out;
            }
            case K::Neg: return fold(e.kids[0], b).scaled(Rational(-1));
            case K::Add: return fold(e.kids[0], b).plus(fold(e.kids[1], b));
            case K::Sub: return fold(e.kids[0], b).plus(fold(e.kids[1], b).scaled(Rational(-1)));
            case K::Mul: {
                LinExpr lhs = fold(e.kids[0], b);
                LinExpr rhs = fold(e.kids[1], b);
                if (lhs.is_constant()) return rhs.scaled(lhs.constant);
                if (rhs.is_constant()) return lhs.scaled(rhs.constant);
                throw pddl::UnsupportedFeature("nonlinear numeric expression");
            }
            case K::Div: {
                LinExpr lhs = fold(e.kids[0], b);
                LinExpr rhs = fold(e.kids[1], b);
                if (!rhs.is_constant())
                    throw pddl::UnsupportedFeature("division by a fluent");
                if (rhs.constant == Rational(0))
                    throw pddl::ValidationError("division by zero in numeric expression");
                return lhs.scaled(Rational(1) / rhs.constant);
            }
        }
        return out;
    }

    void instantiate_all() {
        std::vector<const pddl::ActionSchema*> schemas;
        for (const auto& s : dom_.schemas) schemas.push_back(&s);
        std::sort(schemas.begin(), schemas.end(),
                  [](const auto* a, const auto* b) { return a->name < b->name; });
        for (const auto* s : schemas) instantiate_schema(*s);
    }

    void instantiate_schema(const pddl::ActionSchema& s) {
        std::vector<std::vector<std::string>> candidates(s.parameters.size());
        for (size_t i = 0; i < s.parameters.size(); ++i) {
            for (const auto& o : prob_.objects)
                if (dom_.is_subtype(o.type, s.parameters[i].type))
                    candidates[i].push_back(o.name);
            std::sort(candidates[i].begin(), candidates[i].end());
            if (candidates[i].empty()) return;  // no objects of this type
        }
        Binding b;
        std::vector<size_t> idx(s.parameters.size(), 0);
        instantiate_rec(s, candidates, 0, b);
    }

    void instantiate_rec(const pddl::ActionSchema& s,
                         const std::vector<std::vector<std::string>>& candidates, size_t depth,
                         Binding& b) {
        if (depth == s.parameters.size()) {
            emit(s, b);
            return;
        }
        for (const auto& obj : candidates[depth]) {
            b[s.parameters[depth].name] = obj;
            instantiate_rec(s, candidates, depth + 1, b);
        }
        b.erase(s.parameters[depth].name);
    }

    void emit(const pddl::ActionSchema& s, const Binding& b) {
        GroundAction a;
        a.schema = s.name;
        for (const auto& p : s.parameters) a.objects.push_back(b.at(p.name));
        a.name = ground_name(s.name, a.objects);

        for (const auto& pre : s.pre_pos) {
            Atom ga = substitute(pre, b);
            if (!dynamic_preds_.count(ga.pred)) {
                if (!init_atoms_.count(pddl::atom_name(ga))) return;  // statically false
                continue;  // statically true, compiled out
            }
            a.pre_pos.push_back(atom_id(ga));
        }
        for (const auto& pre : s.pre_neg) {
            Atom ga = substitute(pre, b);
            if (!dynamic_preds_.count(ga.pred)) {
                if (init_atoms_.count(pddl::atom_name(ga))) return;  // statically true
                continue;
            }
            a.pre_neg.push_back(atom_id(ga));
        }
        for (const auto& cmp : s.pre_num) {
            LinExpr expr = fold(cmp.lhs, b).plus(fold(cmp.rhs, b).scaled(Rational(-1)));
            if (expr.is_constant()) {
                bool ok;
                switch (cmp.op) {
                    case RelOp::Lt: ok = expr.constant < Rational(0); break;
                    case RelOp::Le: ok = expr.constant <= Rational(0); break;
                    case RelOp::Eq: ok = expr.constant == Rational(0); break;
                    case RelOp::Ge: ok = expr.constant >= Rational(0); break;
                    default: ok = expr.constant > Rational(0); break;
                }
                if (!ok) return;
                continue;
            }
            a.pre_num.push_back(GroundComparison{cmp.op, std::move(expr)});
        }
        for (const auto& eff : s.add) a.add.push_back(atom_id(substitute(eff, b)));
        for (const auto& eff : s.del) a.del.push_back(atom_id(substitute(eff, b)));
        for (const auto& u : s.num_effects) {
            Atom target = substitute(Atom{u.fluent, u.args}, b);
            GroundUpdate gu;
            gu.kind = u.kind;
            gu.fluent = fluent_ref(pddl::atom_name(target));
            gu.value = fold(u.value, b);
            a.updates.push_back(std::move(gu));
        }
        dedupe(a.pre_pos);
        dedupe(a.pre_neg);
        dedupe(a.add);
        dedupe(a.del);
        if (actions_.size() >= opts_.max_actions)
            throw GroundingError("grounding exceeds the action cap (" +
                                 std::to_string(opts_.max_actions) + ")");
        actions_.push_back(std::move(a));
    }

    static void dedupe(std::vector<int>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    void prune_unreachable() {
        // Ensure goal and init atoms exist in the table even without achievers.
        // A goal over a static predicate is constant: when true in init it
        // must start (and stay) true, otherwise it stays false and correctly
        // forces unsolvability.
        std::vector<int> init_ids;
        for (const auto& g : prob_.goal) {
            int id = atom_id(g);
            goal_ids_.push_back(id);
            if (!dynamic_preds_.count(g.pred) && init_atoms_.count(pddl::atom_name(g)))
                init_ids.push_back(id);
        }
        for (const auto& a : prob_.init_atoms) {
            if (dynamic_preds_.count(a.pred)) init_ids.push_back(atom_id(a));
        }
        std::vector<bool> reachable(atom_names_.size(), false);
        for (int id : init_ids) reachable[id] = true;
        std::vector<bool> applied(actions_.size(), false);
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i < actions_.size(); ++i) {
                if (applied[i]) continue;
                bool ok = true;
                for (int p : actions_[i].pre_pos)
                    if (!reachable[p]) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                applied[i] = true;
                changed = true;
                for (int ad : actions_[i].add) {
                    if (static_cast<size_t>(ad) >= reachable.size()) reachable.resize(ad + 1, false);
                    if (!reachable[ad]) {
                        reachable[ad] = true;
                    }
                }
            }
        }
        std::vector<GroundAction> kept;
        for (size_t i = 0; i < actions_.size(); ++i) {
            if (!applied[i]) continue;
            GroundAction& a = actions_[i];
            // Deletes and negative preconditions on never-true atoms are inert.
            auto unreachable = [&](int id) { return !reachable[id]; };
            a.del.erase(std::remove_if(a.del.begin(), a.del.end(), unreachable), a.del.end());
            a.pre_neg.erase(std::remove_if(a.pre_neg.begin(), a.pre_neg.end(), unreachable),
                            a.pre_neg.end());
            kept.push_back(std::move(a));
        }
        actions_ = std::move(kept);
        reachable_ = std::move(reachable);
        init_ids_ = std::move(init_ids);
    }

    void renumber() {
        // Keep reachable atoms plus goal atoms; deterministic name order.
        std::set<int> used(goal_ids_.begin(), goal_ids_.end());
        for (size_t id = 0; id < reachable_.size(); ++id)
            if (reachable_[id]) used.insert(static_cast<int>(id));
        std::vector<std::string> names;
        for (int id : used) names.push_back(atom_names_[id]);
        std::sort(names.begin(), names.end());
        std::map<int, int> remap;
        for (size_t id = 0; id < atom_names_.size(); ++id) {
            if (!used.count(static_cast<int>(id))) continue;
            int nid = static_cast<int>(
                std::lower_bound(names.begin(), names.end(), atom_names_[id]) - names.begin());
            remap[static_cast<int>(id)] = nid;
        }
        task_.atom_names = names;
        for (size_t i = 0; i < names.size(); ++i) task_.atom_index[names[i]] = static_cast<int>(i);

        std::sort(actions_.begin(), actions_.end(), [](const GroundAction& a, const GroundAction& b) {
            return a.schema < b.schema || (a.schema == b.schema && a.objects < b.objects);
        });
        auto remap_vec = [&remap](std::vector<int>& v) {
            for (int& id : v) id = remap.at(id);
            std::sort(v.begin(), v.end());
        };
        for (size_t i = 0; i < actions_.size(); ++i) {
            GroundAction& a = actions_[i];
            a.id = static_cast<int>(i);
            remap_vec(a.pre_pos);
            remap_vec(a.pre_neg);
            remap_vec(a.add);
            remap_vec(a.del);
        }
        task_.actions = std::move(actions_);

        // Fluents: sorted by name, remapped.
        std::vector<std::string> fnames = fluent_names_;
        std::sort(fnames.begin(), fnames.end());
        std::map<int, int> fremap;
        for (size_t id = 0; id < fluent_names_.size(); ++id)
            fremap[static_cast<int>(id)] = static_cast<int>(
                std::lower_bound(fnames.begin(), fnames.end(), fluent_names_[id]) - fnames.begin());
        task_.fluent_names = fnames;
        task_.fluent_init.resize(fnames.size());
        for (size_t i = 0; i < fnames.size(); ++i) {
            task_.fluent_index[fnames[i]] = static_cast<int>(i);
            task_.fluent_init[i] = init_fluents_.at(fnames[i]);
        }
        for (auto& a : task_.actions) {
            for (auto& u : a.updates) {
                u.fluent = fremap.at(u.fluent);
                for (auto& [f, c] : u.value.terms) f = fremap.at(f);
                std::sort(u.value.terms.begin(), u.value.terms.end());
            }
            for (auto& c : a.pre_num) {
                for (auto& [f, co] : c.expr.terms) f = fremap.at(f);
                std::sort(c.expr.terms.begin(), c.expr.terms.end());
            }
            std::sort(a.updates.begin(), a.updates.end(),
                      [](const GroundUpdate& x, const GroundUpdate& y) { return x.fluent < y.fluent; });
        }

        task_.init.assign(task_.atom_names.size(), false);
        for (int id : init_ids_)
            if (remap.count(id)) task_.init[remap.at(id)] = true;
        task_.goal.clear();
        for (int id : goal_ids_) task_.goal.push_back(remap.at(id));
    }

    const pddl::DomainModel& dom_;
    const pddl::ProblemModel& prob_;
    const GroundOptions& opts_;

    std::set<std::string> dynamic_preds_;
    std::set<std::string> dynamic_fluents_;
    std::set<std::string> init_atoms_;
    std::map<std::string, Rational> init_fluents_;

    std::vector<std::string> atom_names_;
    std::map<std::string, int> atom_ids_;
    std::vector<std::string> fluent_names_;
    std::map<std::string, int> fluent_ids_;
    std::vector<GroundAction> actions_;
    std::vector<bool> reachable_;
    std::vector<int> goal_ids_;
    std::vector<int> init_ids_;

    GroundTask task_;
};

}  // namespace

GroundTask ground(const pddl::DomainModel& dom, const pddl::ProblemModel& prob,
                  const GroundOptions& opts) {
    return Grounder(dom, prob, opts).run();
}

std::vector<bool> reachable_atoms(const GroundTask& task) {
    std::vector<bool> reachable = task.init;
    reachable.resize(task.atom_names.size(), false);
    std::vector<bool> applied(task.actions.size(), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < task.actions.size(); ++i) {
            if (applied[i]) continue;
            bool ok = true;
            for (int p : task.actions[i].pre_pos)
                if (!reachable[p]) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            applied[i] = true;
            changed = true;
            for (int ad : task.actions[i].add) reachable[ad] = true;
        }
    }
    return reachable;
}

void attach_utilities(GroundTask& task, const std::map<std::string, Rational>& utilities) {
    task.goal_utilities.assign(task.goal.size(), Rational(0));
    for (const auto& [name, value] : utilities) {
        int id = task.atom_id(name);
        bool found = false;
        for (size_t i = 0; i < task.goal.size(); ++i) {
            if (task.goal[i] == id) {
                task.goal_utilities[i] = value;
                found = true;
                break;
            }
        }
        if (!found)
            throw pddl::ValidationError("utility key " + name + " is not a goal atom");
    }
}

State initial_state(const GroundTask& task) {
    State s;
    s.atoms = task.init;
    s.fluents = task.fluent_init;
    return s;
}

Rational eval(const LinExpr& e, const State& s) {
    Rational v = e.constant;
    for (const auto& [f, c] : e.terms) v += c * s.fluents.at(f);
    return v;
}

bool holds(const GroundComparison& c, const State& s) {
    Rational v = eval(c.expr, s);
    switch (c.op) {
        case RelOp::Lt: return v < Rational(0);
        case RelOp::Le: return v <= Rational(0);
        case RelOp::Eq: return v == Rational(0);
        case RelOp::Ge: return v >= Rational(0);
        default: return v > Rational(0);
    }
}

bool applicable(const GroundTask& task, const State& s, const GroundAction& a) {
    (void)task;
    for (int p : a.pre_pos)
        if (!s.atoms[p]) return false;
    for (int p : a.pre_neg)
        if (s.atoms[p]) return false;
    for (const auto& c : a.pre_num)
        if (!holds(c, s)) return false;
    return true;
}

State apply(const GroundTask& task, const State& s, const GroundAction& a) {
    (void)task;
    State out = s;
    for (int d : a.del) out.atoms[d] = false;
    for (int ad : a.add) out.atoms[ad] = true;
    for (const auto& u : a.updates) {
        Rational v = eval(u.value, s);  // effects read the pre-state
        switch (u.kind) {
            case UpdateKind::Assign: out.fluents[u.fluent] = v; break;
            case UpdateKind::Increase: out.fluents[u.fluent] = s.fluents[u.fluent] + v; break;
            case UpdateKind::Decrease: out.fluents[u.fluent] = s.fluents[u.fluent] - v; break;
        }
    }
    return out;
}

bool goal_satisfied(const GroundTask& task, const State& s) {
    if (task.mode == Mode::Osp) return true;
    for (int g : task.goal)
        if (!s.atoms[g]) return false;
    return true;
}

std::string dump(const GroundTask& task) {
    std::ostringstream os;
    os << "mode " << pddl::mode_name(task.mode) << "\n";
    for (size_t i = 0; i < task.atom_names.size(); ++i)
        os << "atom " << i << " " << task.atom_names[i] << "\n";
    for (size_t i = 0; i < task.fluent_names.size(); ++i)
        os << "fluent " << i << " " << task.fluent_names[i] << " " << task.fluent_init[i] << "\n";
    for (const auto& a : task.actions) {
        os << "action " << a.id << " " << a.name << " :pre";
        for (int p : a.pre_pos) os << " " << p;
        os << " :neg";
        for (int p : a.pre_neg) os << " " << p;
        os << " :add";
        for (int p : a.add) os << " " << p;
        os << " :del";
        for (int p : a.del) os << " " << p;
        os << "\n";
    }
    os << "init";
    for (size_t i = 0; i < task.init.size(); ++i)
        if (task.init[i]) os << " " << i;
    os << "\ngoal";
    for (int g : task.goal) os << " " << g;
    os << "\n";
    return os.str();
}

}  // namespace bplan::ground
