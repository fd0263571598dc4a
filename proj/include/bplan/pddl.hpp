#ifndef BPLAN_PDDL_HPP
#define BPLAN_PDDL_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bplan/rational.hpp"

namespace bplan::pddl {

// Syntax error with source position.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line, int col)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + msg),
          line(line),
          col(col) {}
    int line, col;
};

// A construct outside the supported fragment; names the construct.
struct UnsupportedFeature : std::runtime_error {
    explicit UnsupportedFeature(const std::string& construct)
        : std::runtime_error("unsupported construct: " + construct), construct(construct) {}
    std::string construct;
};

// Semantic violation (unknown symbol, type mismatch, arity, ...).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TypedName {
    std::string name;
    std::string type;
    bool operator==(const TypedName& o) const { return name == o.name && type == o.type; }
};

// Atom template; args are parameters (leading '?') or constants.
struct Atom {
    std::string pred;
    std::vector<std::string> args;
    bool operator==(const Atom& o) const { return pred == o.pred && args == o.args; }
    bool operator<(const Atom& o) const {
        return pred < o.pred || (pred == o.pred && args < o.args);
    }
};

// Canonical ground-atom spelling: name(arg1,arg2), bare name when nullary.
std::string atom_name(const Atom& a);

enum class RelOp { Lt, Le, Eq, Ge, Gt };

struct NumExpr {
    enum class Kind { Constant, Fluent, Add, Sub, Neg, Mul, Div };
    Kind kind = Kind::Constant;
    Rational constant;               // Constant
    std::string fluent;              // Fluent
    std::vector<std::string> args;   // Fluent
    std::vector<NumExpr> kids;       // Add/Sub: 2, Neg: 1, Mul: 2, Div: 2
    bool operator==(const NumExpr& o) const;
};

struct NumComparison {
    RelOp op;
    NumExpr lhs, rhs;
    bool operator==(const NumComparison& o) const {
        return op == o.op && lhs == o.lhs && rhs == o.rhs;
    }
};

enum class UpdateKind { Assign, Increase, Decrease };

struct NumUpdate {
    UpdateKind kind;
    std::string fluent;
    std::vector<std::string> args;
    NumExpr value;
    bool operator==(const NumUpdate& o) const {
        return kind == o.kind && fluent == o.fluent && args == o.args && value == o.value;
    }
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> parameters;
    std::vector<Atom> pre_pos;
    std::vector<Atom> pre_neg;
    std::vector<NumComparison> pre_num;
    std::vector<Atom> add;
    std::vector<Atom> del;
    std::vector<NumUpdate> num_effects;
};

struct PredicateDecl {
    std::string name;
    std::vector<TypedName> params;
};

struct DomainModel {
    std::string name;
    std::vector<std::string> requirements;
    std::map<std::string, std::string> types;  // type -> supertype ("object" roots)
    std::vector<TypedName> constants;
    std::vector<PredicateDecl> predicates;
    std::vector<PredicateDecl> fluents;
    std::vector<ActionSchema> schemas;

    bool has_type(const std::string& t) const;
    bool is_subtype(const std::string& t, const std::string& super) const;
    const PredicateDecl* find_predicate(const std::string& name) const;
    const PredicateDecl* find_fluent(const std::string& name) const;
};

enum class Mode { Classical, Osp, Numeric };
std::string mode_name(Mode m);

struct ProblemModel {
    std::string name;
    std::string domain_name;
    std::vector<TypedName> objects;  // domain constants folded in
    std::vector<Atom> init_atoms;
    std::vector<std::pair<Atom, Rational>> init_fluents;
    std::vector<Atom> goal;  // positive ground conjunction; soft set in osp mode
    Mode mode = Mode::Classical;
};

DomainModel parse_domain(const std::string& text);
ProblemModel parse_problem(const std::string& text, const DomainModel& dom);

std::string unparse_domain(const DomainModel& dom);
std::string unparse_problem(const ProblemModel& prob, const DomainModel& dom);

DomainModel parse_domain_file(const std::string& path);
ProblemModel parse_problem_file(const std::string& path, const DomainModel& dom);

}  // namespace bplan::pddl

#endif
