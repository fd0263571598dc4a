#ifndef BPLAN_GROUND_HPP
#define BPLAN_GROUND_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bplan/pddl.hpp"
#include "bplan/rational.hpp"

namespace bplan::ground {

struct GroundingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Linear expression over dynamic ground fluent ids; statics are folded away.
struct LinExpr {
    Rational constant;
    std::vector<std::pair<int, Rational>> terms;  // sorted by fluent id

    void add_term(int fluent, const Rational& coeff);
    LinExpr scaled(const Rational& by) const;
    LinExpr plus(const LinExpr& o) const;
    bool is_constant() const { return terms.empty(); }
};

// expr OP 0 after moving everything left.
struct GroundComparison {
    pddl::RelOp op;
    LinExpr expr;
};

struct GroundUpdate {
    pddl::UpdateKind kind;
    int fluent;
    LinExpr value;
};

struct GroundAction {
    int id;
    std::string schema;
    std::vector<std::string> objects;
    std::string name;  // canonical schema(o1,o2)
    std::vector<int> pre_pos, pre_neg;
    std::vector<GroundComparison> pre_num;
    std::vector<int> add, del;
    std::vector<GroundUpdate> updates;
};

struct GroundTask {
    std::vector<std::string> atom_names;
    std::vector<GroundAction> actions;
    std::vector<std::string> fluent_names;
    std::vector<Rational> fluent_init;
    std::vector<bool> init;
    std::vector<int> goal;
    pddl::Mode mode = pddl::Mode::Classical;
    std::vector<Rational> goal_utilities;  // aligned with goal; zeros unless attached
    std::vector<pddl::TypedName> objects;

    std::map<std::string, int> atom_index;
    std::map<std::string, int> fluent_index;

    int atom_id(const std::string& name) const {
        auto it = atom_index.find(name);
        return it == atom_index.end() ? -1 : it->second;
    }
    int fluent_id(const std::string& name) const {
        auto it = fluent_index.find(name);
        return it == fluent_index.end() ? -1 : it->second;
    }
    const GroundAction* find_action(const std::string& name) const {
        for (const auto& a : actions)
            if (a.name == name) return &a;
        return nullptr;
    }
};

struct GroundOptions {
    size_t max_actions = 1000000;
};

GroundTask ground(const pddl::DomainModel& dom, const pddl::ProblemModel& prob,
                  const GroundOptions& opts = {});

// Delete-relaxed reachability over-approximation (negative and numeric
// preconditions treated as satisfiable).
std::vector<bool> reachable_atoms(const GroundTask& task);

// Attaches per-goal-atom utilities; keys must name goal atoms.
void attach_utilities(GroundTask& task, const std::map<std::string, Rational>& utilities);

// ---- state transition semantics ----
struct State {
    std::vector<bool> atoms;
    std::vector<Rational> fluents;
    bool operator==(const State& o) const { return atoms == o.atoms && fluents == o.fluents; }
};

// A plan is a sequence of ground action ids (empty steps already removed).
struct Plan {
    std::vector<int> actions;
    bool operator==(const Plan& o) const { return actions == o.actions; }
    bool operator<(const Plan& o) const { return actions < o.actions; }
};

// states[0] is the initial state; one entry per executed step thereafter.
using StateTrace = std::vector<State>;

State initial_state(const GroundTask& task);
Rational eval(const LinExpr& e, const State& s);
bool holds(const GroundComparison& c, const State& s);
bool applicable(const GroundTask& task, const State& s, const GroundAction& a);
State apply(const GroundTask& task, const State& s, const GroundAction& a);
bool goal_satisfied(const GroundTask& task, const State& s);

// Line-oriented debug dump, deterministic.
std::string dump(const GroundTask& task);

}  // namespace bplan::ground

#endif
