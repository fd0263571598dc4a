#include "bplan/encode.hpp"
#include "bplan/metrics.hpp"
#include "doctest.h"

using namespace bplan;
using namespace bplan::encode;
using namespace bplan::ground;

namespace {

GroundTask make_task(const std::string& domain, const std::string& problem) {
    auto dom = pddl::parse_domain(domain);
    auto prob = pddl::parse_problem(problem, dom);
    return ground::ground(dom, prob);
}

GroundTask chain_task() {
    return make_task(
        "(define (domain chain) (:predicates (p0) (p1) (p2))"
        " (:action step_a :parameters () :precondition (p0) :effect (and (p1) (not (p0))))"
        " (:action step_b :parameters () :precondition (p1) :effect (and (p2) (not (p1)))))",
        "(define (problem chainp) (:domain chain) (:init (p0)) (:goal (p2)))");
}

GroundTask trivial_task() {
    return make_task(
        "(define (domain d) (:predicates (p)) (:action a :parameters ()"
        " :precondition (p) :effect (p)))",
        "(define (problem e) (:domain d) (:init (p)) (:goal (p)))");
}

}  // namespace

TEST_CASE("horizon zero") {
    SUBCASE("init satisfying the goal is sat with the empty plan") {
        GroundTask task = trivial_task();
        auto session = solver::make_session();
        EncodedTask enc = encode_task(task, 0, *session);
        REQUIRE(session->check_sat(solver::Budget::unlimited()) == solver::CheckResult::Sat);
        auto model = session->get_model();
        CHECK(extract_plan(model, enc).actions.empty());
        StateTrace trace = reconstruct_trace(model, enc);
        CHECK(trace.size() == 1);
    }
    SUBCASE("init not satisfying the goal is unsat") {
        GroundTask task = chain_task();
        auto session = solver::make_session();
        encode_task(task, 0, *session);
        CHECK(session->check_sat(solver::Budget::unlimited()) == solver::CheckResult::Unsat);
    }
}

TEST_CASE("toy chain at n=2 yields the unique two-step plan") {
    GroundTask task = chain_task();
    auto session = solver::make_session();
    EncodedTask enc = encode_task(task, 2, *session);
    REQUIRE(session->check_sat(solver::Budget::unlimited()) == solver::CheckResult::Sat);
    auto model = session->get_model();
    Plan plan = extract_plan(model, enc);
    REQUIRE(plan.actions.size() == 2);
    CHECK(task.actions[plan.actions[0]].name == "step_a");
    CHECK(task.actions[plan.actions[1]].name == "step_b");
    StateTrace trace = reconstruct_trace(model, enc);
    CHECK(trace.size() == 3);
    // agreement with the validator's simulation
    StateTrace sim = metrics::validate_plan(task, plan);
    CHECK(trace.back() == sim.back());
}

TEST_CASE("empty steps let longer horizons host short plans") {
    GroundTask task = chain_task();
    for (int n = 2; n <= 5; ++n) {
        auto session = solver::make_session();
        EncodedTask enc = encode_task(task, n, *session);
        REQUIRE(session->check_sat(solver::Budget::unlimited()) == solver::CheckResult::Sat);
        Plan plan = extract_plan(session->get_model(), enc);
        CHECK(plan.actions.size() == 2);  // the chain has exactly one plan
    }
}

TEST_CASE("exact-makespan mode forbids empty steps") {
    GroundTask task = chain_task();
    EncodeOptions opts;
    opts.exact_makespan = true;
    for (int n : {0, 1, 3, 4}) {
        auto session = solver::make_session();
        encode_task(task, n, *session, opts);
        CHECK(session->check_sat(solver::Budget::unlimited()) == solver::CheckResult::Unsat);
    }
    auto session = solver::make_session();
    encode_task(task, 2, *session, opts);
    CHECK(session->check_sat(solver::Budget::unlimited()) == solver::CheckResult::Sat);
}

TEST_CASE("numeric effects land in the trace") {
    GroundTask task = make_task(
        "(define (domain n) (:requirements :numeric-fluents) (:predicates (done))"
        " (:functions (level))"
        " (:action pump :parameters () :precondition (<= (level) 95)"
        "  :effect (and (done) (increase (level) 5))))",
        "(define (problem n1) (:domain n) (:init (= (level) 0)) (:goal (done)))");
    auto session = solver::make_session();
    EncodedTask enc = encode_task(task, 1, *session);
    REQUIRE(session->check_sat(solver::Budget::unlimited()) == solver::CheckResult::Sat);
    auto model = session->get_model();
    StateTrace trace = reconstruct_trace(model, enc);
    REQUIRE(trace.size() == 2);
    CHECK(trace[0].fluents[0] == Rational(0));
    CHECK(trace[1].fluents[0] == Rational(5));
}

TEST_CASE("rovers p01 at n=10 produces a validator-accepted 10-action plan") {
    auto dom = pddl::parse_domain_file(std::string(BPLAN_FIXTURE_DIR) + "/rovers/domain.pddl");
    auto prob =
        pddl::parse_problem_file(std::string(BPLAN_FIXTURE_DIR) + "/rovers/p01.pddl", dom);
    GroundTask task = ground::ground(dom, prob);
    auto session = solver::make_session();
    EncodeOptions opts;
    opts.exact_makespan = true;
    EncodedTask enc = encode_task(task, 10, *session, opts);
    REQUIRE(session->check_sat(solver::Budget::unlimited()) == solver::CheckResult::Sat);
    auto model = session->get_model();
    Plan plan = extract_plan(model, enc);
    CHECK(plan.actions.size() == 10);
    metrics::validate_plan(task, plan);  // throws when invalid
}

TEST_CASE("horizon cap raises HorizonError") {
    GroundTask task = chain_task();
    auto session = solver::make_session();
    EncodeOptions opts;
    opts.horizon_cap = 3;
    CHECK_THROWS_AS(encode_task(task, 4, *session, opts), HorizonError);
    CHECK_THROWS_AS(encode_task(task, -1, *session), std::invalid_argument);
}

TEST_CASE("monotone horizon: satisfiable stays satisfiable when n grows") {
    // Small two-path task with several plans.
    GroundTask task = make_task(
        "(define (domain dia) (:predicates (s) (l) (r) (g))"
        " (:action go_l :parameters () :precondition (s) :effect (and (l) (not (s))))"
        " (:action go_r :parameters () :precondition (s) :effect (and (r) (not (s))))"
        " (:action fin_l :parameters () :precondition (l) :effect (g))"
        " (:action fin_r :parameters () :precondition (r) :effect (g)))",
        "(define (problem dia1) (:domain dia) (:init (s)) (:goal (g)))");
    bool seen_sat = false;
    for (int n = 0; n <= 6; ++n) {
        auto session = solver::make_session();
        encode_task(task, n, *session);
        bool sat = session->check_sat(solver::Budget::unlimited()) == solver::CheckResult::Sat;
        if (seen_sat) CHECK(sat);
        if (sat) seen_sat = true;
    }
    CHECK(seen_sat);
}

TEST_CASE("at most one action per step across sampled models") {
    // Re-solving with forbid clauses exercises many distinct models; the
    // extractor itself throws on any step with two selected actions.
    GroundTask task = make_task(
        "(define (domain dia) (:predicates (s) (l) (r) (g))"
        " (:action go_l :parameters () :precondition (s) :effect (and (l) (not (s))))"
        " (:action go_r :parameters () :precondition (s) :effect (and (r) (not (s))))"
        " (:action fin_l :parameters () :precondition (l) :effect (g))"
        " (:action fin_r :parameters () :precondition (r) :effect (g)))",
        "(define (problem dia1) (:domain dia) (:init (s)) (:goal (g)))");
    auto session = solver::make_session();
    EncodedTask enc = encode_task(task, 3, *session);
    int models = 0;
    while (session->check_sat(solver::Budget::unlimited()) == solver::CheckResult::Sat) {
        auto model = session->get_model();
        std::vector<int> slots = extract_step_assignment(model, enc);  // throws on violation
        reconstruct_trace(model, enc);
        // forbid this exact assignment to move on
        std::vector<solver::Formula> differs;
        for (int i = 0; i < enc.horizon(); ++i) {
            if (slots[i] < 0)
                differs.push_back(solver::f_var(enc.step_active(i)));
            else
                differs.push_back(solver::f_not(solver::f_var(enc.action_var(slots[i], i))));
        }
        session->assert_formula(solver::f_or(differs));
        if (++models > 200) break;
    }
    CHECK(models > 2);
    CHECK(models <= 200);
}
