#include <random>
#include <vector>

#include "bplan/solver.hpp"
#include "doctest.h"

using namespace bplan;
using namespace bplan::solver;

namespace {

std::unique_ptr<Session> fresh(unsigned seed = 0) {
    return make_session(SolverConfig{"", seed});
}

}  // namespace

TEST_CASE("trivial boolean results") {
    SUBCASE("empty session is sat") {
        auto s = fresh();
        CHECK(s->check_sat(Budget::unlimited()) == CheckResult::Sat);
    }
    SUBCASE("asserting true is a no-op") {
        auto s = fresh();
        s->assert_formula(f_true());
        CHECK(s->num_assertions() == 1);
        CHECK(s->check_sat(Budget::unlimited()) == CheckResult::Sat);
    }
    SUBCASE("x and not x is unsat") {
        auto s = fresh();
        auto x = s->new_bool("x");
        s->assert_formula(f_and(f_var(x), f_not(f_var(x))));
        CHECK(s->check_sat(Budget::unlimited()) == CheckResult::Unsat);
    }
    SUBCASE("model of a forced assignment") {
        auto s = fresh();
        auto x = s->new_bool("x");
        s->assert_formula(f_var(x));
        REQUIRE(s->check_sat(Budget::unlimited()) == CheckResult::Sat);
        CHECK(s->get_model().bool_value(x));
    }
    SUBCASE("get_model without sat is a contract error") {
        auto s = fresh();
        CHECK_THROWS_AS((void)s->get_model(), SolverContractError);
    }
}

TEST_CASE("random CNF agrees with brute force and models are sound") {
    std::mt19937 rng(42);
    for (int iter = 0; iter < 200; ++iter) {
        int nv = 3 + rng() % 9;
        int nc = 2 + rng() % (nv * 4);
        std::vector<std::vector<int>> cls;
        for (int i = 0; i < nc; ++i) {
            std::vector<int> c;
            int len = 1 + rng() % 3;
            for (int j = 0; j < len; ++j) {
                int v = 1 + rng() % nv;
                c.push_back(rng() % 2 ? v : -v);
            }
            cls.push_back(c);
        }
        bool brute_sat = false;
        for (int mask = 0; mask < (1 << nv) && !brute_sat; ++mask) {
            bool all = true;
            for (auto& c : cls) {
                bool any = false;
                for (int l : c) {
                    bool val = (mask >> (std::abs(l) - 1)) & 1;
                    if ((l > 0) == val) {
                        any = true;
                        break;
                    }
                }
                if (!any) {
                    all = false;
                    break;
                }
            }
            if (all) brute_sat = true;
        }
        auto s = fresh(static_cast<unsigned>(iter));
        std::vector<BoolVar> vars;
        for (int v = 0; v < nv; ++v) vars.push_back(s->new_bool("v"));
        for (auto& c : cls) {
            std::vector<Formula> lits;
            for (int l : c)
                lits.push_back(l > 0 ? f_var(vars[l - 1]) : f_not(f_var(vars[-l - 1])));
            s->assert_formula(f_or(lits));
        }
        auto r = s->check_sat(Budget::unlimited());
        REQUIRE(r == (brute_sat ? CheckResult::Sat : CheckResult::Unsat));
        if (r == CheckResult::Sat)
            REQUIRE(first_violated_assertion(*s, s->get_model()) == -1);
    }
}

TEST_CASE("linear rational arithmetic") {
    SUBCASE("infeasible bounds conflict through a sum") {
        auto s = fresh();
        auto x = s->new_num("x", NumKind::Real);
        auto y = s->new_num("y", NumKind::Real);
        LinearExpr sum;
        sum.add(x, Rational(1));
        sum.add(y, Rational(1));
        s->assert_formula(f_cmp(sum, CmpOp::Le, Rational(3)));
        s->assert_formula(f_cmp(LinearExpr(x), CmpOp::Ge, Rational(2)));
        s->assert_formula(f_cmp(LinearExpr(y), CmpOp::Ge, Rational(2)));
        CHECK(s->check_sat(Budget::unlimited()) == CheckResult::Unsat);
    }
    SUBCASE("strict bounds are honoured in models") {
        auto s = fresh();
        auto x = s->new_num("x", NumKind::Real);
        s->assert_formula(f_cmp(LinearExpr(x), CmpOp::Ge, Rational(2)));
        s->assert_formula(f_cmp(LinearExpr(x), CmpOp::Lt, Rational(3)));
        REQUIRE(s->check_sat(Budget::unlimited()) == CheckResult::Sat);
        auto m = s->get_model();
        CHECK(m.num_value(x) >= Rational(2));
        CHECK(m.num_value(x) < Rational(3));
    }
    SUBCASE("negated equality splits into strict comparisons") {
        auto s = fresh();
        auto x = s->new_num("x", NumKind::Real);
        s->assert_formula(f_cmp(LinearExpr(x), CmpOp::Ge, Rational(5)));
        s->assert_formula(f_cmp(LinearExpr(x), CmpOp::Le, Rational(5)));
        s->assert_formula(f_not(f_cmp(LinearExpr(x), CmpOp::Eq, Rational(5))));
        CHECK(s->check_sat(Budget::unlimited()) == CheckResult::Unsat);
    }
    SUBCASE("boolean guards drive arithmetic") {
        auto s = fresh();
        auto b = s->new_bool("b");
        auto x = s->new_num("x", NumKind::Real);
        s->assert_formula(f_implies(f_var(b), f_cmp(LinearExpr(x), CmpOp::Eq, Rational(5))));
        s->assert_formula(f_implies(f_not(f_var(b)), f_cmp(LinearExpr(x), CmpOp::Eq, Rational(7))));
        s->assert_formula(f_cmp(LinearExpr(x), CmpOp::Gt, Rational(6)));
        REQUIRE(s->check_sat(Budget::unlimited()) == CheckResult::Sat);
        auto m = s->get_model();
        CHECK_FALSE(m.bool_value(b));
        CHECK(m.num_value(x) == Rational(7));
        CHECK(first_violated_assertion(*s, m) == -1);
    }
}

TEST_CASE("integer variables") {
    SUBCASE("pinched integer takes the exact value") {
        auto s = fresh();
        auto v = s->new_num("v", NumKind::Integer);
        s->assert_formula(f_cmp(LinearExpr(v), CmpOp::Ge, Rational(3)));
        s->assert_formula(f_cmp(LinearExpr(v), CmpOp::Le, Rational(3)));
        REQUIRE(s->check_sat(Budget::unlimited()) == CheckResult::Sat);
        CHECK(s->get_model().num_value(v) == Rational(3));
    }
    SUBCASE("fractional hole is unsat for integers") {
        auto s = fresh();
        auto v = s->new_num("v", NumKind::Integer);
        s->assert_formula(f_cmp(LinearExpr(v), CmpOp::Gt, Rational(1, 2)));
        s->assert_formula(f_cmp(LinearExpr(v), CmpOp::Lt, Rational(3, 4)));
        CHECK(s->check_sat(Budget::unlimited()) == CheckResult::Unsat);
    }
}

namespace {
CheckResult pigeonhole(int pigeons, int holes, const Budget& budget) {
    auto s = fresh();
    std::vector<std::vector<BoolVar>> in(pigeons, std::vector<BoolVar>(holes));
    for (int i = 0; i < pigeons; ++i)
        for (int j = 0; j < holes; ++j) in[i][j] = s->new_bool("p");
    for (int i = 0; i < pigeons; ++i) {
        std::vector<Formula> row;
        for (int j = 0; j < holes; ++j) row.push_back(f_var(in[i][j]));
        s->assert_formula(f_or(row));
    }
    for (int j = 0; j < holes; ++j)
        for (int a = 0; a < pigeons; ++a)
            for (int b = a + 1; b < pigeons; ++b)
                s->assert_formula(f_or(f_not(f_var(in[a][j])), f_not(f_var(in[b][j]))));
    return s->check_sat(budget);
}
}  // namespace

TEST_CASE("budget exhaustion reports unknown, not unsat") {
    CHECK(pigeonhole(6, 5, Budget::unlimited()) == CheckResult::Unsat);
    CHECK(pigeonhole(11, 10, Budget::wall_ms(1)) == CheckResult::Unknown);
    Budget mem;
    mem.memory_mb = 1;
    CHECK(pigeonhole(12, 11, mem) == CheckResult::Unknown);
}

namespace {
Formula random_formula(std::mt19937& rng, const std::vector<BoolVar>& vars, int depth) {
    if (depth == 0 || rng() % 4 == 0) {
        Formula leaf = f_var(vars[rng() % vars.size()]);
        return rng() % 2 ? leaf : f_not(leaf);
    }
    switch (rng() % 5) {
        case 0: {
            std::vector<Formula> kids;
            int n = 2 + rng() % 3;
            for (int i = 0; i < n; ++i) kids.push_back(random_formula(rng, vars, depth - 1));
            return f_and(kids);
        }
        case 1: {
            std::vector<Formula> kids;
            int n = 2 + rng() % 3;
            for (int i = 0; i < n; ++i) kids.push_back(random_formula(rng, vars, depth - 1));
            return f_or(kids);
        }
        case 2:
            return f_implies(random_formula(rng, vars, depth - 1),
                             random_formula(rng, vars, depth - 1));
        case 3:
            return f_iff(random_formula(rng, vars, depth - 1),
                         random_formula(rng, vars, depth - 1));
        default: return f_not(random_formula(rng, vars, depth - 1));
    }
}
}  // namespace

TEST_CASE("nested formula compilation agrees with structural evaluation") {
    std::mt19937 rng(2024);
    for (int iter = 0; iter < 150; ++iter) {
        int nv = 2 + rng() % 4;
        auto s = fresh(static_cast<unsigned>(iter));
        std::vector<BoolVar> vars;
        for (int v = 0; v < nv; ++v) vars.push_back(s->new_bool("v"));
        Formula f = random_formula(rng, vars, 3);
        bool brute_sat = false;
        for (int mask = 0; mask < (1 << nv) && !brute_sat; ++mask) {
            SolverModel m;
            m.bools.assign(vars.back().id + 1, 0);
            for (int v = 0; v < nv; ++v) m.bools[vars[v].id] = (mask >> v) & 1;
            if (evaluate(f, m)) brute_sat = true;
        }
        s->assert_formula(f);
        auto r = s->check_sat(Budget::unlimited());
        REQUIRE(r == (brute_sat ? CheckResult::Sat : CheckResult::Unsat));
        if (r == CheckResult::Sat) REQUIRE(evaluate(f, s->get_model()));
    }
}

TEST_CASE("assertions are monotone across checks") {
    auto s = fresh();
    auto x = s->new_bool("x");
    s->assert_formula(f_var(x));
    CHECK(s->check_sat(Budget::unlimited()) == CheckResult::Sat);
    s->assert_formula(f_not(f_var(x)));
    CHECK(s->check_sat(Budget::unlimited()) == CheckResult::Unsat);
}

#ifdef BPLAN_STUB_SOLVER
TEST_CASE("smtlib subprocess backend protocol") {
    const std::string stub = std::string("python3 ") + BPLAN_STUB_SOLVER;
    SUBCASE("scripted sat answer with model") {
        auto s = make_session(SolverConfig{stub + " sat", 0});
        auto x = s->new_bool("x");
        auto n = s->new_num("n", NumKind::Integer);
        s->assert_formula(f_var(x));
        REQUIRE(s->check_sat(Budget::unlimited()) == CheckResult::Sat);
        auto m = s->get_model();
        CHECK(m.bool_value(x));
        CHECK(m.num_value(n) == Rational(0));
        CHECK(s->backend_name().find("smtlib") == 0);
    }
    SUBCASE("scripted unsat answer") {
        auto s = make_session(SolverConfig{stub + " unsat", 0});
        auto x = s->new_bool("x");
        s->assert_formula(f_var(x));
        CHECK(s->check_sat(Budget::unlimited()) == CheckResult::Unsat);
    }
    SUBCASE("watchdog kills a hanging solver and reports unknown") {
        auto s = make_session(SolverConfig{stub + " hang", 0});
        auto x = s->new_bool("x");
        s->assert_formula(f_var(x));
        CHECK(s->check_sat(Budget::wall_ms(100)) == CheckResult::Unknown);
    }
    SUBCASE("a crashing solver raises a distinct error") {
        auto s = make_session(SolverConfig{stub + " crash", 0});
        auto x = s->new_bool("x");
        s->assert_formula(f_var(x));
        CHECK_THROWS_AS((void)s->check_sat(Budget::unlimited()), SolverCrash);
    }
    SUBCASE("garbage output raises a distinct error") {
        auto s = make_session(SolverConfig{stub + " garbage", 0});
        auto x = s->new_bool("x");
        s->assert_formula(f_var(x));
        CHECK_THROWS_AS((void)s->check_sat(Budget::unlimited()), SolverCrash);
    }
}
#endif
