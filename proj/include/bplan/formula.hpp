#ifndef BPLAN_FORMULA_HPP
#define BPLAN_FORMULA_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bplan/rational.hpp"

namespace bplan::solver {

// Variable handles are plain indices into the owning session's tables.
struct BoolVar {
    int id = -1;
    bool valid() const { return id >= 0; }
};
struct NumVar {
    int id = -1;
    bool valid() const { return id >= 0; }
};

enum class NumKind { Integer, Real };

enum class CmpOp { Lt, Le, Eq, Ge, Gt };

// Linear expression over numeric variables: constant + sum coeff * var.
class LinearExpr {
public:
    LinearExpr() = default;
    explicit LinearExpr(Rational constant) : constant_(constant) {}
    explicit LinearExpr(NumVar v) { terms_[v.id] = Rational(1); }

    LinearExpr& add(NumVar v, Rational coeff) {
        Rational& c = terms_[v.id];
        c += coeff;
        if (c == Rational(0)) terms_.erase(v.id);
        return *this;
    }
    LinearExpr& add_constant(Rational c) {
        constant_ += c;
        return *this;
    }

    LinearExpr operator+(const LinearExpr& o) const;
    LinearExpr operator-(const LinearExpr& o) const;
    LinearExpr scaled(Rational by) const;

    const std::map<int, Rational>& terms() const { return terms_; }
    const Rational& constant() const { return constant_; }
    bool is_constant() const { return terms_.empty(); }

    bool operator==(const LinearExpr& o) const {
        return constant_ == o.constant_ && terms_ == o.terms_;
    }

private:
    std::map<int, Rational> terms_;
    Rational constant_;
};

enum class FKind { True, False, Var, Not, And, Or, Implies, Iff, Cmp };

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
    FKind kind;
    std::vector<Formula> kids;  // Not:1, Implies/Iff:2, And/Or:any
    BoolVar var;                // Var
    LinearExpr lhs;             // Cmp: lhs op rhs
    CmpOp op = CmpOp::Le;
    Rational rhs;
};

Formula f_true();
Formula f_false();
Formula f_var(BoolVar v);
Formula f_not(Formula f);
Formula f_and(std::vector<Formula> fs);
Formula f_or(std::vector<Formula> fs);
Formula f_implies(Formula a, Formula b);
Formula f_iff(Formula a, Formula b);
Formula f_cmp(LinearExpr lhs, CmpOp op, Rational rhs);

inline Formula f_and(Formula a, Formula b) { return f_and(std::vector<Formula>{a, b}); }
inline Formula f_or(Formula a, Formula b) { return f_or(std::vector<Formula>{a, b}); }

// Assignment as returned by a solver: total over declared variables.
struct SolverModel {
    std::vector<signed char> bools;   // -1 unset, 0 false, 1 true (indexed by BoolVar id)
    std::vector<Rational> nums;       // indexed by NumVar id

    bool bool_value(BoolVar v) const { return bools.at(v.id) == 1; }
    const Rational& num_value(NumVar v) const { return nums.at(v.id); }
};

Rational evaluate(const LinearExpr& e, const SolverModel& m);
// Independent structural evaluation; used to cross-check solver models.
bool evaluate(const Formula& f, const SolverModel& m);

std::string to_string(const Formula& f);

}  // namespace bplan::solver

#endif
