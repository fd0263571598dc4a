#include "bplan/formula.hpp"

#include <sstream>

namespace bplan::solver {

LinearExpr LinearExpr::operator+(const LinearExpr& o) const {
    LinearExpr r = *this;
    r.constant_ += o.constant_;
    for (const auto& [v, c] : o.terms_) r.add(NumVar{v}, c);
    return r;
}

LinearExpr LinearExpr::operator-(const LinearExpr& o) const {
    return *this + o.scaled(Rational(-1));
}

LinearExpr LinearExpr::scaled(Rational by) const {
    LinearExpr r;
    if (by == Rational(0)) return r;
    r.constant_ = constant_ * by;
    for (const auto& [v, c] : terms_) r.terms_[v] = c * by;
    return r;
}

namespace {
Formula make(FKind kind, std::vector<Formula> kids = {}) {
    auto node = std::make_shared<FormulaNode>();
    node->kind = kind;
    node->kids = std::move(kids);
    return node;
}
}  // namespace

Formula f_true() {
    static const Formula t = make(FKind::True);
    return t;
}

Formula f_false() {
    static const Formula f = make(FKind::False);
    return f;
}

Formula f_var(BoolVar v) {
    auto node = std::make_shared<FormulaNode>();
    node->kind = FKind::Var;
    node->var = v;
    return node;
}

Formula f_not(Formula f) {
    if (f->kind == FKind::True) return f_false();
    if (f->kind == FKind::False) return f_true();
    if (f->kind == FKind::Not) return f->kids[0];
    return make(FKind::Not, {std::move(f)});
}

Formula f_and(std::vector<Formula> fs) {
    std::vector<Formula> kids;
    for (auto& f : fs) {
        if (f->kind == FKind::False) return f_false();
        if (f->kind == FKind::True) continue;
        kids.push_back(std::move(f));
    }
    if (kids.empty()) return f_true();
    if (kids.size() == 1) return kids[0];
    return make(FKind::And, std::move(kids));
}

Formula f_or(std::vector<Formula> fs) {
    std::vector<Formula> kids;
    for (auto& f : fs) {
        if (f->kind == FKind::True) return f_true();
        if (f->kind == FKind::False) continue;
        kids.push_back(std::move(f));
    }
    if (kids.empty()) return f_false();
    if (kids.size() == 1) return kids[0];
    return make(FKind::Or, std::move(kids));
}

Formula f_implies(Formula a, Formula b) {
    if (a->kind == FKind::True) return b;
    if (a->kind == FKind::False) return f_true();
    if (b->kind == FKind::True) return f_true();
    if (b->kind == FKind::False) return f_not(a);
    return make(FKind::Implies, {std::move(a), std::move(b)});
}

Formula f_iff(Formula a, Formula b) {
    if (a->kind == FKind::True) return b;
    if (b->kind == FKind::True) return a;
    if (a->kind == FKind::False) return f_not(b);
    if (b->kind == FKind::False) return f_not(a);
    return make(FKind::Iff, {std::move(a), std::move(b)});
}

Formula f_cmp(LinearExpr lhs, CmpOp op, Rational rhs) {
    if (lhs.is_constant()) {
        bool holds;
        switch (op) {
            case CmpOp::Lt: holds = lhs.constant() < rhs; break;
            case CmpOp::Le: holds = lhs.constant() <= rhs; break;
            case CmpOp::Eq: holds = lhs.constant() == rhs; break;
            case CmpOp::Ge: holds = lhs.constant() >= rhs; break;
            default: holds = lhs.constant() > rhs; break;
        }
        return holds ? f_true() : f_false();
    }
    auto node = std::make_shared<FormulaNode>();
    node->kind = FKind::Cmp;
    node->lhs = std::move(lhs);
    node->op = op;
    node->rhs = std::move(rhs);
    return node;
}

Rational evaluate(const LinearExpr& e, const SolverModel& m) {
    Rational v = e.constant();
    for (const auto& [var, coeff] : e.terms()) v += coeff * m.num_value(NumVar{var});
    return v;
}

bool evaluate(const Formula& f, const SolverModel& m) {
    switch (f->kind) {
        case FKind::True: return true;
        case FKind::False: return false;
        case FKind::Var: return m.bool_value(f->var);
        case FKind::Not: return !evaluate(f->kids[0], m);
        case FKind::And:
            for (const auto& k : f->kids)
                if (!evaluate(k, m)) return false;
            return true;
        case FKind::Or:
            for (const auto& k : f->kids)
                if (evaluate(k, m)) return true;
            return false;
        case FKind::Implies: return !evaluate(f->kids[0], m) || evaluate(f->kids[1], m);
        case FKind::Iff: return evaluate(f->kids[0], m) == evaluate(f->kids[1], m);
        case FKind::Cmp: {
            Rational v = evaluate(f->lhs, m);
            switch (f->op) {
                case CmpOp::Lt: return v < f->rhs;
                case CmpOp::Le: return v <= f->rhs;
                case CmpOp::Eq: return v == f->rhs;
                case CmpOp::Ge: return v >= f->rhs;
                default: return v > f->rhs;
            }
        }
    }
    return false;
}

namespace {
const char* op_name(CmpOp op) {
    switch (op) {
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Eq: return "=";
        case CmpOp::Ge: return ">=";
        default: return ">";
    }
}

void print(std::ostream& os, const Formula& f) {
    switch (f->kind) {
        case FKind::True: os << "true"; return;
        case FKind::False: os << "false"; return;
        case FKind::Var: os << "b" << f->var.id; return;
        case FKind::Not:
            os << "(not ";
            print(os, f->kids[0]);
            os << ")";
            return;
        case FKind::And:
        case FKind::Or: {
            os << (f->kind == FKind::And ? "(and" : "(or");
            for (const auto& k : f->kids) {
                os << " ";
                print(os, k);
            }
            os << ")";
            return;
        }
        case FKind::Implies:
        case FKind::Iff: {
            os << (f->kind == FKind::Implies ? "(=> " : "(= ");
            print(os, f->kids[0]);
            os << " ";
            print(os, f->kids[1]);
            os << ")";
            return;
        }
        case FKind::Cmp: {
            os << "(" << op_name(f->op);
            os << " (+";
            for (const auto& [v, c] : f->lhs.terms()) os << " (* " << c << " n" << v << ")";
            os << " " << f->lhs.constant() << ")";
            os << " " << f->rhs << ")";
            return;
        }
    }
}
}  // namespace

std::string to_string(const Formula& f) {
    std::ostringstream os;
    print(os, f);
    return os.str();
}

}  // namespace bplan::solver
