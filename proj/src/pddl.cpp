#include "bplan/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace bplan::pddl {

std::string atom_name(const Atom& a) {
    if (a.args.empty()) return a.pred;
    std::string out = a.pred + "(";
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ",";
        out += a.args[i];
    }
    return out + ")";
}

bool NumExpr::operator==(const NumExpr& o) const {
    return kind == o.kind && constant == o.constant && fluent == o.fluent && args == o.args &&
           kids == o.kids;
}

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::Classical: return "classical";
        case Mode::Osp: return "osp";
        default: return "numeric";
    }
}

bool DomainModel::has_type(const std::string& t) const {
    return t == "object" || types.count(t) > 0;
}

bool DomainModel::is_subtype(const std::string& t, const std::string& super) const {
    if (super == "object" || t == super) return true;
    std::string cur = t;
    int guard = 0;
    while (types.count(cur) && ++guard < 1000) {
        cur = types.at(cur);
        if (cur == super) return true;
    }
    return false;
}

const PredicateDecl* DomainModel::find_predicate(const std::string& name) const {
    for (const auto& p : predicates)
        if (p.name == name) return &p;
    return nullptr;
}

const PredicateDecl* DomainModel::find_fluent(const std::string& name) const {
    for (const auto& f : fluents)
        if (f.name == name) return &f;
    return nullptr;
}

namespace {

// ---------------------------------------------------------------------------
// s-expression layer
struct Token {
    enum Kind { Open, Close, Symbol, End } kind;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip();
        if (pos_ >= text_.size()) return {Token::End, "", line_, col_};
        char c = text_[pos_];
        if (c == '(') {
            Token t{Token::Open, "(", line_, col_};
            advance();
            return t;
        }
        if (c == ')') {
            Token t{Token::Close, ")", line_, col_};
            advance();
            return t;
        }
        Token t{Token::Symbol, "", line_, col_};
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';') {
            t.text += static_cast<char>(std::tolower(static_cast<unsigned char>(text_[pos_])));
            advance();
        }
        return t;
    }

private:
    void skip() {
        for (;;) {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
                advance();
            if (pos_ < text_.size() && text_[pos_] == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
                continue;
            }
            return;
        }
    }
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

struct Node {
    bool is_list;
    std::string symbol;
    std::vector<Node> kids;
    int line = 0, col = 0;

    bool head_is(const std::string& s) const {
        return is_list && !kids.empty() && !kids[0].is_list && kids[0].symbol == s;
    }
    const std::string& head() const {
        static const std::string empty;
        if (!is_list || kids.empty() || kids[0].is_list) return empty;
        return kids[0].symbol;
    }
};

Node parse_node(Lexer& lex, const Token& first) {
    if (first.kind == Token::End) throw ParseError("unexpected end of input", first.line, first.col);
    if (first.kind == Token::Close) throw ParseError("unexpected ')'", first.line, first.col);
    if (first.kind == Token::Symbol) {
        Node n{false, first.text, {}, first.line, first.col};
        return n;
    }
    Node n{true, "", {}, first.line, first.col};
    for (;;) {
        Token t = lex.next();
        if (t.kind == Token::Close) return n;
        if (t.kind == Token::End) throw ParseError("missing ')'", t.line, t.col);
        n.kids.push_back(parse_node(lex, t));
    }
}

Node parse_top(const std::string& text) {
    Lexer lex(text);
    Token t = lex.next();
    Node n = parse_node(lex, t);
    Token rest = lex.next();
    if (rest.kind != Token::End)
        throw ParseError("trailing input after top-level form", rest.line, rest.col);
    return n;
}

// Typed list: "a b - t c d - u e" (untyped tail gets "object").
std::vector<TypedName> parse_typed_list(const std::vector<Node>& items, size_t from,
                                        const char* what) {
    std::vector<TypedName> out;
    std::vector<std::string> pending;
    for (size_t i = from; i < items.size(); ++i) {
        const Node& n = items[i];
        if (n.is_list) throw ParseError(std::string("expected name in ") + what, n.line, n.col);
        if (n.symbol == "-") {
            if (i + 1 >= items.size() || items[i + 1].is_list)
                throw ParseError("expected type after '-'", n.line, n.col);
            if (items[i + 1].symbol == "either")
                throw UnsupportedFeature("either types");
            const std::string& type = items[i + 1].symbol;
            for (const auto& name : pending) out.push_back({name, type});
            pending.clear();
            ++i;
            continue;
        }
        if (n.head_is("either")) throw UnsupportedFeature("either types");
        pending.push_back(n.symbol);
    }
    for (const auto& name : pending) out.push_back({name, "object"});
    return out;
}

bool is_number(const std::string& s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i >= s.size()) return false;
    bool digit = false;
    for (; i < s.size(); ++i) {
        if (std::isdigit(static_cast<unsigned char>(s[i])))
            digit = true;
        else if (s[i] != '.' && s[i] != '/')
            return false;
    }
    return digit;
}

// ---------------------------------------------------------------------------
// domain parsing
class DomainBuilder {
public:
    DomainModel build(const Node& root) {
        if (!root.head_is("define")) throw ParseError("expected (define ...)", root.line, root.col);
        if (root.kids.size() < 2 || !root.kids[1].head_is("domain") || root.kids[1].kids.size() != 2)
            throw ParseError("expected (domain NAME)", root.line, root.col);
        dom_.name = root.kids[1].kids[1].symbol;
        for (size_t i = 2; i < root.kids.size(); ++i) {
            const Node& sec = root.kids[i];
            const std::string& h = sec.head();
            if (h == ":requirements") requirements(sec);
            else if (h == ":types") types(sec);
            else if (h == ":constants") constants(sec);
            else if (h == ":predicates") predicates(sec);
            else if (h == ":functions") functions(sec);
            else if (h == ":action") action(sec);
            else if (h == ":durative-action") throw UnsupportedFeature(":durative-action");
            else if (h == ":derived") throw UnsupportedFeature(":derived predicates");
            else if (h == ":axiom") throw UnsupportedFeature(":axiom");
            else throw ParseError("unknown domain section " + h, sec.line, sec.col);
        }
        validate();
        return std::move(dom_);
    }

private:
    void requirements(const Node& sec) {
        static const std::set<std::string> supported = {
            ":strips", ":typing", ":negative-preconditions", ":numeric-fluents",
            ":fluents", ":action-costs"};
        for (size_t i = 1; i < sec.kids.size(); ++i) {
            const std::string& r = sec.kids[i].symbol;
            if (!supported.count(r)) throw UnsupportedFeature(r);
            dom_.requirements.push_back(r);
        }
    }

    void types(const Node& sec) {
        std::vector<TypedName> list = parse_typed_list(sec.kids, 1, ":types");
        for (const auto& t : list) {
            if (t.name == "object") continue;
            dom_.types[t.name] = t.type;
        }
        // Supertypes used only on the right-hand side are implicitly declared.
        std::vector<std::string> missing;
        for (const auto& [t, super] : dom_.types)
            if (super != "object" && !dom_.types.count(super)) missing.push_back(super);
        for (const auto& s : missing) dom_.types[s] = "object";
    }

    void constants(const Node& sec) {
        dom_.constants = parse_typed_list(sec.kids, 1, ":constants");
    }

    PredicateDecl decl_from(const Node& n, const char* what) {
        if (!n.is_list || n.kids.empty() || n.kids[0].is_list)
            throw ParseError(std::string("malformed ") + what, n.line, n.col);
        PredicateDecl d;
        d.name = n.kids[0].symbol;
        d.params = parse_typed_list(n.kids, 1, what);
        return d;
    }

    void predicates(const Node& sec) {
        for (size_t i = 1; i < sec.kids.size(); ++i)
            dom_.predicates.push_back(decl_from(sec.kids[i], ":predicates entry"));
    }

    void functions(const Node& sec) {
        // Typed-list syntax over declarations: (f ?x - t) ... [- number]
        for (size_t i = 1; i < sec.kids.size(); ++i) {
            const Node& n = sec.kids[i];
            if (!n.is_list && n.symbol == "-") {
                if (i + 1 < sec.kids.size() && !sec.kids[i + 1].is_list &&
                    sec.kids[i + 1].symbol == "number") {
                    ++i;
                    continue;
                }
                throw UnsupportedFeature("object fluents");
            }
            dom_.fluents.push_back(decl_from(n, ":functions entry"));
        }
    }

    Atom atom_from(const Node& n) {
        if (!n.is_list || n.kids.empty() || n.kids[0].is_list)
            throw ParseError("malformed atom", n.line, n.col);
        Atom a;
        a.pred = n.kids[0].symbol;
        for (size_t i = 1; i < n.kids.size(); ++i) {
            if (n.kids[i].is_list) throw ParseError("nested term in atom", n.line, n.col);
            a.args.push_back(n.kids[i].symbol);
        }
        return a;
    }

    NumExpr num_expr_from(const Node& n) {
        NumExpr e;
        if (!n.is_list) {
            if (is_number(n.symbol)) {
                e.kind = NumExpr::Kind::Constant;
                e.constant = Rational::parse(n.symbol);
                return e;
            }
            // Bare fluent reference without parens is nonstandard; reject.
            throw ParseError("expected numeric expression, got " + n.symbol, n.line, n.col);
        }
        if (n.kids.empty()) throw ParseError("empty numeric expression", n.line, n.col);
        const std::string& h = n.head();
        if (h == "+" || h == "-" || h == "*" || h == "/") {
            if (h == "-" && n.kids.size() == 2) {
                e.kind = NumExpr::Kind::Neg;
                e.kids.push_back(num_expr_from(n.kids[1]));
                return e;
            }
            if (n.kids.size() != 3)
                throw ParseError("arithmetic takes two operands", n.line, n.col);
            e.kind = h == "+"   ? NumExpr::Kind::Add
                     : h == "-" ? NumExpr::Kind::Sub
                     : h == "*" ? NumExpr::Kind::Mul
                                : NumExpr::Kind::Div;
            e.kids.push_back(num_expr_from(n.kids[1]));
            e.kids.push_back(num_expr_from(n.kids[2]));
            return e;
        }
        e.kind = NumExpr::Kind::Fluent;
        Atom a = atom_from(n);
        e.fluent = a.pred;
        e.args = a.args;
        return e;
    }

    bool is_numeric_head(const Node& n) const {
        if (!n.is_list) return is_number(n.symbol);
        const std::string& h = n.head();
        if (h == "+" || h == "-" || h == "*" || h == "/") return true;
        for (const auto& f : dom_.fluents)
            if (f.name == h) return true;
        return false;
    }

    void precondition(const Node& n, ActionSchema& s) {
        if (n.head_is("and")) {
            for (size_t i = 1; i < n.kids.size(); ++i) precondition(n.kids[i], s);
            return;
        }
        const std::string& h = n.head();
        if (h == "or") throw UnsupportedFeature("disjunctive preconditions");
        if (h == "imply") throw UnsupportedFeature("imply preconditions");
        if (h == "forall" || h == "exists") throw UnsupportedFeature("quantified preconditions");
        if (h == "not") {
            if (n.kids.size() != 2) throw ParseError("malformed (not ...)", n.line, n.col);
            if (n.kids[1].head() == "=" || is_comparison_head(n.kids[1].head()))
                throw UnsupportedFeature("negated numeric conditions");
            s.pre_neg.push_back(atom_from(n.kids[1]));
            return;
        }
        if (is_comparison_head(h)) {
            if (n.kids.size() != 3) throw ParseError("comparison takes two operands", n.line, n.col);
            if (h == "=" && !is_numeric_head(n.kids[1]) && !is_numeric_head(n.kids[2]))
                throw UnsupportedFeature(":equality");
            NumComparison cmp;
            cmp.op = h == "<"    ? RelOp::Lt
                     : h == "<=" ? RelOp::Le
                     : h == "="  ? RelOp::Eq
                     : h == ">=" ? RelOp::Ge
                                 : RelOp::Gt;
            cmp.lhs = num_expr_from(n.kids[1]);
            cmp.rhs = num_expr_from(n.kids[2]);
            s.pre_num.push_back(cmp);
            return;
        }
        s.pre_pos.push_back(atom_from(n));
    }

    static bool is_comparison_head(const std::string& h) {
        return h == "<" || h == "<=" || h == "=" || h == ">=" || h == ">";
    }

    void effect(const Node& n, ActionSchema& s) {
        if (n.head_is("and")) {
            for (size_t i = 1; i < n.kids.size(); ++i) effect(n.kids[i], s);
            return;
        }
        const std::string& h = n.head();
        if (h == "when") throw UnsupportedFeature("conditional effects");
        if (h == "forall") throw UnsupportedFeature("quantified effects");
        if (h == "not") {
            if (n.kids.size() != 2) throw ParseError("malformed (not ...)", n.line, n.col);
            s.del.push_back(atom_from(n.kids[1]));
            return;
        }
        if (h == "assign" || h == "increase" || h == "decrease") {
            if (n.kids.size() != 3) throw ParseError("numeric effect takes two operands", n.line, n.col);
            Atom target = atom_from(n.kids[1]);
            if (target.pred == "total-cost") return;  // costs are out of scope (makespan)
            NumUpdate u;
            u.kind = h == "assign"     ? UpdateKind::Assign
                     : h == "increase" ? UpdateKind::Increase
                                       : UpdateKind::Decrease;
            u.fluent = target.pred;
            u.args = target.args;
            u.value = num_expr_from(n.kids[2]);
            s.num_effects.push_back(u);
            return;
        }
        if (h == "scale-up" || h == "scale-down") throw UnsupportedFeature(h);
        s.add.push_back(atom_from(n));
    }

    void action(const Node& sec) {
        ActionSchema s;
        if (sec.kids.size() < 2 || sec.kids[1].is_list)
            throw ParseError("action needs a name", sec.line, sec.col);
        s.name = sec.kids[1].symbol;
        for (size_t i = 2; i < sec.kids.size(); i += 2) {
            if (i + 1 >= sec.kids.size())
                throw ParseError("dangling action keyword", sec.kids[i].line, sec.kids[i].col);
            const std::string& key = sec.kids[i].symbol;
            const Node& val = sec.kids[i + 1];
            if (key == ":parameters") {
                s.parameters = parse_typed_list(val.kids, 0, ":parameters");
            } else if (key == ":precondition") {
                precondition(val, s);
            } else if (key == ":effect") {
                effect(val, s);
            } else {
                throw UnsupportedFeature("action keyword " + key);
            }
        }
        // PDDL applies deletes before adds: an atom in both lists is a net add.
        auto in_add = [&s](const Atom& a) {
            return std::find(s.add.begin(), s.add.end(), a) != s.add.end();
        };
        s.del.erase(std::remove_if(s.del.begin(), s.del.end(), in_add), s.del.end());
        dom_.schemas.push_back(std::move(s));
    }

    void check_atom(const ActionSchema& s, const Atom& a, bool fluent) {
        const PredicateDecl* d = fluent ? dom_.find_fluent(a.pred) : dom_.find_predicate(a.pred);
        if (!d)
            throw ValidationError("action " + s.name + ": undeclared " +
                                  std::string(fluent ? "fluent " : "predicate ") + a.pred);
        if (d->params.size() != a.args.size())
            throw ValidationError("action " + s.name + ": arity mismatch on " + a.pred);
        for (size_t i = 0; i < a.args.size(); ++i) {
            const std::string& arg = a.args[i];
            std::string arg_type;
            if (!arg.empty() && arg[0] == '?') {
                auto it = std::find_if(s.parameters.begin(), s.parameters.end(),
                                       [&](const TypedName& p) { return p.name == arg; });
                if (it == s.parameters.end())
                    throw ValidationError("action " + s.name + ": free variable " + arg);
                arg_type = it->type;
            } else {
                auto it = std::find_if(dom_.constants.begin(), dom_.constants.end(),
                                       [&](const TypedName& c) { return c.name == arg; });
                if (it == dom_.constants.end())
                    throw ValidationError("action " + s.name + ": unknown constant " + arg);
                arg_type = it->type;
            }
            if (!dom_.is_subtype(arg_type, d->params[i].type))
                throw ValidationError("action " + s.name + ": type mismatch on " +
                                      atom_name(a) + " argument " + arg);
        }
    }

    void check_expr(const ActionSchema& s, const NumExpr& e) {
        if (e.kind == NumExpr::Kind::Fluent) {
            Atom a{e.fluent, e.args};
            check_atom(s, a, true);
            return;
        }
        for (const auto& k : e.kids) check_expr(s, k);
    }

    void validate() {
        std::set<std::string> names;
        for (const auto& p : dom_.predicates)
            if (!names.insert(p.name).second)
                throw ValidationError("duplicate predicate name " + p.name);
        for (const auto& f : dom_.fluents)
            if (!names.insert(f.name).second)
                throw ValidationError("duplicate predicate/fluent name " + f.name);
        std::set<std::string> schema_names;
        for (const auto& s : dom_.schemas)
            if (!schema_names.insert(s.name).second)
                throw ValidationError("duplicate action name " + s.name);
        auto check_types = [this](const std::vector<TypedName>& list, const std::string& where) {
            for (const auto& t : list)
                if (!dom_.has_type(t.type))
                    throw ValidationError("unknown type " + t.type + " in " + where);
        };
        for (const auto& p : dom_.predicates) check_types(p.params, "predicate " + p.name);
        for (const auto& f : dom_.fluents) check_types(f.params, "fluent " + f.name);
        check_types(dom_.constants, ":constants");
        for (const auto& s : dom_.schemas) {
            check_types(s.parameters, "action " + s.name);
            for (const auto& a : s.pre_pos) check_atom(s, a, false);
            for (const auto& a : s.pre_neg) check_atom(s, a, false);
            for (const auto& c : s.pre_num) {
                check_expr(s, c.lhs);
                check_expr(s, c.rhs);
            }
            for (const auto& a : s.add) check_atom(s, a, false);
            for (const auto& a : s.del) check_atom(s, a, false);
            for (const auto& u : s.num_effects) {
                check_atom(s, Atom{u.fluent, u.args}, true);
                check_expr(s, u.value);
            }
            for (const auto& a : s.add)
                if (std::find(s.del.begin(), s.del.end(), a) != s.del.end())
                    throw ValidationError("action " + s.name + " adds and deletes " + atom_name(a));
        }
    }

    DomainModel dom_;
};

// ---------------------------------------------------------------------------
// problem parsing
class ProblemBuilder {
public:
    ProblemBuilder(const DomainModel& dom) : dom_(dom) {}

    ProblemModel build(const Node& root) {
        if (!root.head_is("define")) throw ParseError("expected (define ...)", root.line, root.col);
        if (root.kids.size() < 2 || !root.kids[1].head_is("problem") ||
            root.kids[1].kids.size() != 2)
            throw ParseError("expected (problem NAME)", root.line, root.col);
        prob_.name = root.kids[1].kids[1].symbol;
        prob_.objects = dom_.constants;
        for (size_t i = 2; i < root.kids.size(); ++i) {
            const Node& sec = root.kids[i];
            const std::string& h = sec.head();
            if (h == ":domain") {
                if (sec.kids.size() != 2) throw ParseError("malformed :domain", sec.line, sec.col);
                prob_.domain_name = sec.kids[1].symbol;
                if (prob_.domain_name != dom_.name)
                    throw ValidationError("problem references domain " + prob_.domain_name +
                                          " but " + dom_.name + " was parsed");
            } else if (h == ":objects") {
                auto objs = parse_typed_list(sec.kids, 1, ":objects");
                prob_.objects.insert(prob_.objects.end(), objs.begin(), objs.end());
            } else if (h == ":init") {
                init(sec);
            } else if (h == ":goal") {
                if (sec.kids.size() != 2) throw ParseError("malformed :goal", sec.line, sec.col);
                goal(sec.kids[1]);
            } else if (h == ":metric") {
                // plan metrics are out of scope under the makespan assumption
            } else if (h == ":constraints") {
                throw UnsupportedFeature(":constraints");
            } else {
                throw ParseError("unknown problem section " + h, sec.line, sec.col);
            }
        }
        validate();
        prob_.mode = infer_mode();
        return std::move(prob_);
    }

private:
    Atom ground_atom_from(const Node& n) {
        if (!n.is_list || n.kids.empty() || n.kids[0].is_list)
            throw ParseError("malformed atom", n.line, n.col);
        Atom a;
        a.pred = n.kids[0].symbol;
        for (size_t i = 1; i < n.kids.size(); ++i) {
            if (n.kids[i].is_list) throw ParseError("nested term in atom", n.line, n.col);
            if (n.kids[i].symbol[0] == '?')
                throw ValidationError("variable in ground atom: " + n.kids[i].symbol);
            a.args.push_back(n.kids[i].symbol);
        }
        return a;
    }

    void init(const Node& sec) {
        for (size_t i = 1; i < sec.kids.size(); ++i) {
            const Node& n = sec.kids[i];
            if (n.head() == "=") {
                if (n.kids.size() != 3 || !n.kids[1].is_list || n.kids[2].is_list)
                    throw ParseError("malformed fluent initialisation", n.line, n.col);
                Atom f = ground_atom_from(n.kids[1]);
                if (!is_number(n.kids[2].symbol))
                    throw ParseError("fluent initial value must be a number", n.line, n.col);
                prob_.init_fluents.push_back({f, Rational::parse(n.kids[2].symbol)});
                continue;
            }
            if (n.head() == "not") throw UnsupportedFeature("negated init literals");
            prob_.init_atoms.push_back(ground_atom_from(n));
        }
    }

    void goal(const Node& n) {
        if (n.head_is("and")) {
            for (size_t i = 1; i < n.kids.size(); ++i) goal(n.kids[i]);
            return;
        }
        const std::string& h = n.head();
        if (h == "not") throw UnsupportedFeature("negative goals");
        if (h == "or") throw UnsupportedFeature("disjunctive goals");
        if (h == "forall" || h == "exists") throw UnsupportedFeature("quantified goals");
        if (h == "<" || h == "<=" || h == "=" || h == ">=" || h == ">")
            throw UnsupportedFeature("numeric goal conditions");
        prob_.goal.push_back(ground_atom_from(n));
    }

    const TypedName* find_object(const std::string& name) const {
        for (const auto& o : prob_.objects)
            if (o.name == name) return &o;
        return nullptr;
    }

    void check_ground(const Atom& a, bool fluent, const std::string& where) {
        const PredicateDecl* d = fluent ? dom_.find_fluent(a.pred) : dom_.find_predicate(a.pred);
        if (!d)
            throw ValidationError(where + ": undeclared " +
                                  std::string(fluent ? "fluent " : "predicate ") + a.pred);
        if (d->params.size() != a.args.size())
            throw ValidationError(where + ": arity mismatch on " + atom_name(a));
        for (size_t i = 0; i < a.args.size(); ++i) {
            const TypedName* obj = find_object(a.args[i]);
            if (!obj) throw ValidationError(where + ": unknown object " + a.args[i]);
            if (!dom_.is_subtype(obj->type, d->params[i].type))
                throw ValidationError(where + ": type mismatch on " + atom_name(a) +
                                      " argument " + a.args[i]);
        }
    }

    void validate() {
        std::set<std::string> names;
        for (const auto& o : prob_.objects) {
            if (!names.insert(o.name).second)
                throw ValidationError("duplicate object " + o.name);
            if (!dom_.has_type(o.type))
                throw ValidationError("object " + o.name + " has unknown type " + o.type);
        }
        for (const auto& a : prob_.init_atoms) check_ground(a, false, ":init");
        // Repeated goal atoms collapse to one (the goal is a set).
        std::vector<Atom> unique_goal;
        for (const auto& g : prob_.goal)
            if (std::find(unique_goal.begin(), unique_goal.end(), g) == unique_goal.end())
                unique_goal.push_back(g);
        prob_.goal = std::move(unique_goal);
        std::set<std::string> assigned;
        for (const auto& [f, v] : prob_.init_fluents) {
            check_ground(f, true, ":init");
            if (!assigned.insert(atom_name(f)).second)
                throw ValidationError("duplicate initial value for " + atom_name(f));
            (void)v;
        }
        for (const auto& a : prob_.goal) check_ground(a, false, ":goal");
    }

    Mode infer_mode() const {
        for (const auto& s : dom_.schemas) {
            if (!s.pre_num.empty() || !s.num_effects.empty()) return Mode::Numeric;
        }
        return Mode::Classical;
    }

    const DomainModel& dom_;
    ProblemModel prob_;
};

// ---------------------------------------------------------------------------
// unparse
void print_typed_list(std::ostream& os, const std::vector<TypedName>& list) {
    for (size_t i = 0; i < list.size(); ++i) {
        if (i) os << " ";
        os << list[i].name << " - " << list[i].type;
    }
}

void print_atom(std::ostream& os, const Atom& a) {
    os << "(" << a.pred;
    for (const auto& arg : a.args) os << " " << arg;
    os << ")";
}

void print_num_expr(std::ostream& os, const NumExpr& e) {
    switch (e.kind) {
        case NumExpr::Kind::Constant: os << e.constant; return;
        case NumExpr::Kind::Fluent: print_atom(os, Atom{e.fluent, e.args}); return;
        case NumExpr::Kind::Neg:
            os << "(- ";
            print_num_expr(os, e.kids[0]);
            os << ")";
            return;
        case NumExpr::Kind::Add:
        case NumExpr::Kind::Sub:
        case NumExpr::Kind::Mul:
        case NumExpr::Kind::Div: {
            const char* op = e.kind == NumExpr::Kind::Add   ? "+"
                             : e.kind == NumExpr::Kind::Sub ? "-"
                             : e.kind == NumExpr::Kind::Mul ? "*"
                                                            : "/";
            os << "(" << op << " ";
            print_num_expr(os, e.kids[0]);
            os << " ";
            print_num_expr(os, e.kids[1]);
            os << ")";
            return;
        }
    }
}

const char* rel_op_text(RelOp op) {
    switch (op) {
        case RelOp::Lt: return "<";
        case RelOp::Le: return "<=";
        case RelOp::Eq: return "=";
        case RelOp::Ge: return ">=";
        default: return ">";
    }
}

}  // namespace

DomainModel parse_domain(const std::string& text) {
    return DomainBuilder().build(parse_top(text));
}

ProblemModel parse_problem(const std::string& text, const DomainModel& dom) {
    return ProblemBuilder(dom).build(parse_top(text));
}

std::string unparse_domain(const DomainModel& dom) {
    std::ostringstream os;
    os << "(define (domain " << dom.name << ")\n";
    if (!dom.requirements.empty()) {
        os << "  (:requirements";
        for (const auto& r : dom.requirements) os << " " << r;
        os << ")\n";
    }
    if (!dom.types.empty()) {
        os << "  (:types";
        for (const auto& [t, super] : dom.types) os << " " << t << " - " << super;
        os << ")\n";
    }
    if (!dom.constants.empty()) {
        os << "  (:constants ";
        print_typed_list(os, dom.constants);
        os << ")\n";
    }
    if (!dom.predicates.empty()) {
        os << "  (:predicates\n";
        for (const auto& p : dom.predicates) {
            os << "    (" << p.name;
            if (!p.params.empty()) {
                os << " ";
                print_typed_list(os, p.params);
            }
            os << ")\n";
        }
        os << "  )\n";
    }
    if (!dom.fluents.empty()) {
        os << "  (:functions\n";
        for (const auto& f : dom.fluents) {
            os << "    (" << f.name;
            if (!f.params.empty()) {
                os << " ";
                print_typed_list(os, f.params);
            }
            os << ")\n";
        }
        os << "  )\n";
    }
    for (const auto& s : dom.schemas) {
        os << "  (:action " << s.name << "\n    :parameters (";
        print_typed_list(os, s.parameters);
        os << ")\n    :precondition (and";
        for (const auto& a : s.pre_pos) {
            os << " ";
            print_atom(os, a);
        }
        for (const auto& a : s.pre_neg) {
            os << " (not ";
            print_atom(os, a);
            os << ")";
        }
        for (const auto& c : s.pre_num) {
            os << " (" << rel_op_text(c.op) << " ";
            print_num_expr(os, c.lhs);
            os << " ";
            print_num_expr(os, c.rhs);
            os << ")";
        }
        os << ")\n    :effect (and";
        for (const auto& a : s.add) {
            os << " ";
            print_atom(os, a);
        }
        for (const auto& a : s.del) {
            os << " (not ";
            print_atom(os, a);
            os << ")";
        }
        for (const auto& u : s.num_effects) {
            const char* kw = u.kind == UpdateKind::Assign     ? "assign"
                             : u.kind == UpdateKind::Increase ? "increase"
                                                              : "decrease";
            os << " (" << kw << " ";
            print_atom(os, Atom{u.fluent, u.args});
            os << " ";
            print_num_expr(os, u.value);
            os << ")";
        }
        os << ")\n  )\n";
    }
    os << ")\n";
    return os.str();
}

std::string unparse_problem(const ProblemModel& prob, const DomainModel& dom) {
    std::ostringstream os;
    os << "(define (problem " << prob.name << ")\n  (:domain " << dom.name << ")\n";
    std::vector<TypedName> own;
    for (const auto& o : prob.objects)
        if (std::find(dom.constants.begin(), dom.constants.end(), o) == dom.constants.end())
            own.push_back(o);
    os << "  (:objects ";
    print_typed_list(os, own);
    os << ")\n  (:init\n";
    for (const auto& a : prob.init_atoms) {
        os << "    ";
        print_atom(os, a);
        os << "\n";
    }
    for (const auto& [f, v] : prob.init_fluents) {
        os << "    (= ";
        print_atom(os, f);
        os << " " << v << ")\n";
    }
    os << "  )\n  (:goal (and";
    for (const auto& a : prob.goal) {
        os << " ";
        print_atom(os, a);
    }
    os << "))\n)\n";
    return os.str();
}

namespace {
std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}
}  // namespace

DomainModel parse_domain_file(const std::string& path) { return parse_domain(read_file(path)); }

ProblemModel parse_problem_file(const std::string& path, const DomainModel& dom) {
    return parse_problem(read_file(path), dom);
}

}  // namespace bplan::pddl
