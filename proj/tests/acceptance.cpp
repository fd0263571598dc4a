// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <map>
#include <set>

#include "bplan/metrics.hpp"
#include "bplan/run.hpp"
#include "property_suite.hpp"

using namespace bplan;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what, long long ms) {
    std::printf("%s criterion %d: %s (%lld ms)\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
                ms);
    if (!ok) ++failures;
}

std::string fixture(const std::string& rel) { return std::string(BPLAN_FIXTURE_DIR) + "/" + rel; }
std::string suite(const std::string& rel) { return std::string(BPLAN_SUITE_DIR) + "/" + rel; }

long long elapsed_ms(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

// --- criterion 1: rovers p01 optimal makespan is exactly 10 -----------------
void criterion_1() {
    auto start = Clock::now();
    bool ok = false;
    std::string note = "rovers p01 optimal length = 10";
    try {
        auto dom = pddl::parse_domain_file(fixture("rovers/domain.pddl"));
        auto prob = pddl::parse_problem_file(fixture("rovers/p01.pddl"), dom);
        ground::GroundTask task = ground::ground(dom, prob);
        planner::BudgetClock clock(120, 0);
        auto r = planner::find_optimal_length(task, 20, solver::SolverConfig{}, clock);
        ok = r.status == planner::LengthSearchResult::Status::Found && r.length == 10;
        if (!ok)
            note += " [got " +
                    (r.status == planner::LengthSearchResult::Status::Found
                         ? std::to_string(r.length)
                         : std::string("no result")) +
                    "]";
    } catch (const std::exception& e) {
        note += std::string(" [error: ") + e.what() + "]";
    }
    report(1, ok && elapsed_ms(start) <= 120000, note, elapsed_ms(start));
}

// --- criterion 2: Fig.-2 reproduction on the two-rover fixture --------------
void criterion_2() {
    auto start = Clock::now();
    bool ok = false;
    std::string note = "two-rover fixture: fbi k=3 gives 3 valid plans in 3 distinct cells";
    try {
        run::RunConfig cfg;
        cfg.domain_path = fixture("rovers/domain.pddl");
        cfg.problem_path = fixture("rovers/two_rovers.pddl");
        cfg.features_path = fixture("rovers/features_classical.json");
        cfg.timeout_s = 180;
        run::DiversityReport r = run::run_solve(cfg);
        std::set<std::string> cells;
        bool pure_fbi = true;  // all plans from the behaviour phase (Alg. 1)
        for (const auto& p : r.plans) {
            cells.insert(p.behaviour.dump());
            pure_fbi = pure_fbi && p.phase == 'b';
        }
        bool grid_ok = false;
        if (r.plans.size() == 3) {
            std::string csv = run::render_grid(r, 0, 1);
            int occupied = 0;
            for (const std::string& id : {"p0", "p1", "p2"})
                if (csv.find(id) != std::string::npos) ++occupied;
            grid_ok = occupied == 3;
        }
        ok = r.status == "solved" && r.plans.size() == 3 && r.behaviour_count == 3 &&
             cells.size() == 3 && pure_fbi && grid_ok && run::verify_report(cfg, r).empty();
        if (!ok)
            note += " [status " + r.status + ", plans " + std::to_string(r.plans.size()) +
                    ", bc " + std::to_string(r.behaviour_count) + "]";
    } catch (const std::exception& e) {
        note += std::string(" [error: ") + e.what() + "]";
    }
    report(2, ok && elapsed_ms(start) <= 180000, note, elapsed_ms(start));
}

// --- criterion 3: oracle equivalence on hand-built toys ---------------------
struct Toy {
    std::string name;
    std::string domain;
    std::string problem;
    std::string features;  // feature-config json
    int horizon;
};

void criterion_3() {
    auto start = Clock::now();
    std::vector<Toy> toys = {
        {"chain",
         "(define (domain chain) (:predicates (p0) (p1) (p2))"
         " (:action step_a :parameters () :precondition (p0) :effect (and (p1) (not (p0))))"
         " (:action step_b :parameters () :precondition (p1) :effect (and (p2) (not (p1)))))",
         "(define (problem chainp) (:domain chain) (:init (p0)) (:goal (p2)))",
         R"({"dimensions": [{"kind": "cost_bound"}]})", 3},
        {"diamond",
         "(define (domain dia) (:predicates (s) (l) (r) (g))"
         " (:action go_l :parameters () :precondition (s) :effect (and (l) (not (s))))"
         " (:action go_r :parameters () :precondition (s) :effect (and (r) (not (s))))"
         " (:action fin_l :parameters () :precondition (l) :effect (g))"
         " (:action fin_r :parameters () :precondition (r) :effect (g)))",
         "(define (problem dia1) (:domain dia) (:init (s)) (:goal (g)))",
         R"({"dimensions": [{"kind": "cost_bound"}]})", 3},
        {"cycle",
         "(define (domain cyc) (:predicates (s0) (s1) (g))"
         " (:action spin_up :parameters () :precondition (s0) :effect (and (s1) (not (s0))))"
         " (:action spin_down :parameters () :precondition (s1) :effect (and (s0) (not (s1))))"
         " (:action finish :parameters () :precondition (s0) :effect (g)))",
         "(define (problem cycp) (:domain cyc) (:init (s0)) (:goal (g)))",
         R"({"dimensions": [{"kind": "cost_bound"}]})", 3},
        {"two_goals",
         "(define (domain two) (:predicates (s) (g1) (g2))"
         " (:action mk1 :parameters () :precondition (s) :effect (g1))"
         " (:action mk2 :parameters () :precondition (s) :effect (g2)))",
         "(define (problem two1) (:domain two) (:init (s)) (:goal (and (g1) (g2))))",
         R"({"dimensions": [{"kind": "goal_order"}]})", 3},
        {"machines",
         "(define (domain mach) (:types machine) (:predicates (ready) (g))"
         " (:action run :parameters (?m - machine) :precondition (ready) :effect (g)))",
         "(define (problem mach1) (:domain mach) (:objects m1 m2 - machine) (:init (ready))"
         " (:goal (g)))",
         R"({"dimensions": [{"kind": "cost_bound"},)"
         R"( {"kind": "resource_utilisation", "resources": ["m1", "m2"]}]})",
         2},
        {"pump",
         "(define (domain n) (:requirements :numeric-fluents) (:predicates (done))"
         " (:functions (foo))"
         " (:action pump :parameters () :precondition (<= (foo) 8)"
         "  :effect (and (done) (increase (foo) 2)))"
         " (:action vent :parameters () :precondition (done) :effect (and (done)"
         "  (decrease (foo) 1))))",
         "(define (problem n1) (:domain n) (:init (= (foo) 0)) (:goal (done)))",
         R"({"dimensions": [{"kind": "numeric_fluent", "fluent": "foo",)"
         R"( "min": -20, "max": 20, "epsilon": 2}]})",
         3},
    };
    int passed = 0;
    std::string note;
    for (const auto& toy : toys) {
        auto toy_start = Clock::now();
        try {
            auto dom = pddl::parse_domain(toy.domain);
            auto prob = pddl::parse_problem(toy.problem, dom);
            ground::GroundTask task = ground::ground(dom, prob);
            dims::BehaviourSpace space =
                dims::build_behaviour_space(pddl::parse_feature_config(toy.features), task);
            planner::FbiOptions opts;
            opts.horizon = toy.horizon;
            opts.cost_bound = toy.horizon;
            planner::FbiResult r = planner::fbi(task, space, 1000000, opts);
            std::vector<ground::Plan> oracle_plans =
                metrics::oracle_enumerate(task, toy.horizon, toy.horizon);
            std::set<dims::Behaviour> oracle_behaviours;
            for (const auto& p : oracle_plans) {
                ground::StateTrace trace = metrics::validate_plan(task, p);
                oracle_behaviours.insert(dims::plan_behaviour(space, task, p, trace));
            }
            bool toy_ok = r.behaviour_count ==
                              static_cast<long long>(oracle_behaviours.size()) &&
                          elapsed_ms(toy_start) <= 10000;
            if (toy_ok)
                ++passed;
            else
                note += " [" + toy.name + ": fbi " + std::to_string(r.behaviour_count) +
                        " vs oracle " + std::to_string(oracle_behaviours.size()) + "]";
        } catch (const std::exception& e) {
            note += " [" + toy.name + ": " + e.what() + "]";
        }
    }
    report(3, passed == static_cast<int>(toys.size()),
           "oracle equivalence on " + std::to_string(toys.size()) + " toys" + note,
           elapsed_ms(start));
}

// --- criterion 4: diversity dominance over the naive baseline ---------------
void criterion_4() {
    auto start = Clock::now();
    std::vector<std::string> instances;
    for (const char* d : {"gripper", "transport", "rovers"})
        for (int i = 1; i <= 4; ++i)
            instances.push_back(std::string(d) + "_p" + std::to_string(i));
    bool all_ok = true;
    std::string note;
    int checked = 0;
    for (long long k : {5, 10}) {
        int strict = 0;
        for (const auto& inst : instances) {
            std::string domain = inst.substr(0, inst.find("_p"));
            run::RunConfig cfg;
            cfg.domain_path = suite("domains/" + domain + ".pddl");
            cfg.problem_path = suite("domains/" + inst + ".pddl");
            cfg.features_path = suite("domains/" + domain + "_features.json");
            cfg.k = k;
            cfg.timeout_s = 150;
            run::DiversityReport fbi_report = run::run_solve(cfg);
            cfg.naive = true;
            run::DiversityReport naive_report = run::run_solve(cfg);
            bool usable = fbi_report.status != "error" && fbi_report.status != "budget" &&
                          naive_report.status != "error" && naive_report.status != "budget";
            if (!usable) {
                all_ok = false;
                note += " [" + inst + " k=" + std::to_string(k) + ": " + fbi_report.status +
                        "/" + naive_report.status +
                        (fbi_report.error.empty() ? "" : " " + fbi_report.error) + "]";
                continue;
            }
            ++checked;
            if (fbi_report.behaviour_count < naive_report.behaviour_count) {
                all_ok = false;
                note += " [" + inst + " k=" + std::to_string(k) + ": fbi " +
                        std::to_string(fbi_report.behaviour_count) + " < naive " +
                        std::to_string(naive_report.behaviour_count) + "]";
            }
            if (fbi_report.behaviour_count > naive_report.behaviour_count) ++strict;
        }
        if (strict * 2 < static_cast<int>(instances.size())) {
            all_ok = false;
            note += " [k=" + std::to_string(k) + ": strict only " + std::to_string(strict) + "/" +
                    std::to_string(instances.size()) + "]";
        }
    }
    bool ok = all_ok && checked == static_cast<int>(instances.size()) * 2 &&
              elapsed_ms(start) <= 30 * 60 * 1000;
    report(4,
           ok,
           "BC(fbi) >= BC(naive) on 12 instances, 3 domains, k in {5,10}, strict on half" + note,
           elapsed_ms(start));
}

// --- criterion 5: OSP mode with the worked utilities ------------------------
void criterion_5() {
    auto start = Clock::now();
    bool ok = false;
    std::string note = "osp rovers: plans with equal cost and different utility";
    try {
        run::RunConfig cfg;
        cfg.domain_path = fixture("rovers/domain.pddl");
        cfg.problem_path = fixture("rovers/p01.pddl");
        cfg.features_path = fixture("rovers/features_osp.json");
        cfg.k = 40;  // enough to exhaust every (cost, utility) cell
        cfg.timeout_s = 180;
        run::DiversityReport r = run::run_solve(cfg);
        bool pair_found = false;
        for (size_t i = 0; i < r.plans.size() && !pair_found; ++i)
            for (size_t j = i + 1; j < r.plans.size() && !pair_found; ++j)
                if (r.plans[i].cost == r.plans[j].cost && r.plans[i].utility &&
                    r.plans[j].utility && *r.plans[i].utility != *r.plans[j].utility)
                    pair_found = true;
        bool costs_ok = true;
        for (const auto& p : r.plans) costs_ok = costs_ok && p.cost <= 5;
        ok = r.mode == "osp" && r.plans.size() >= 2 && pair_found && costs_ok &&
             (r.status == "solved" || r.status == "exhausted");
        if (!ok)
            note += " [status " + r.status + ", plans " + std::to_string(r.plans.size()) + "]";
    } catch (const std::exception& e) {
        note += std::string(" [error: ") + e.what() + "]";
    }
    report(5, ok && elapsed_ms(start) <= 180000, note, elapsed_ms(start));
}

// --- criterion 6: numeric mode with boxed energies ---------------------------
void criterion_6() {
    auto start = Clock::now();
    bool ok = false;
    std::string note = "numeric rovers: distinct box tuples, box arithmetic vs simulation";
    try {
        auto dom = pddl::parse_domain_file(fixture("rovers_num/domain.pddl"));
        auto prob = pddl::parse_problem_file(fixture("rovers_num/p01.pddl"), dom);
        ground::GroundTask task = ground::ground(dom, prob);
        pddl::FeatureConfig cfg =
            pddl::parse_feature_config_file(fixture("rovers_num/features_numeric.json"));
        dims::BehaviourSpace space = dims::build_behaviour_space(cfg, task);

        planner::BudgetClock clock(180, 0);
        auto l = planner::find_optimal_length(task, 20, solver::SolverConfig{}, clock);
        if (l.status != planner::LengthSearchResult::Status::Found)
            throw std::runtime_error("length search failed");
        long long c = planner::compute_cost_bound(*cfg.quality_q, l.length);
        planner::FbiOptions opts;
        opts.horizon = static_cast<int>(c);
        opts.cost_bound = c;
        opts.clock = &clock;
        planner::FbiResult r = planner::fbi(task, space, cfg.k.value_or(4), opts);

        std::set<std::pair<long long, long long>> tuples;
        bool boxes_ok = true;
        for (const auto& e : r.plans) {
            ground::StateTrace trace = metrics::validate_plan(task, e.plan);
            long long b0 = e.behaviour.values[0].integer;
            long long b1 = e.behaviour.values[1].integer;
            tuples.insert({b0, b1});
            for (size_t di = 0; di < 2; ++di) {
                const dims::Dimension& d = space.dimensions[di];
                const Rational& v = trace.back().fluents[d.fluent];
                long long box = e.behaviour.values[di].integer;
                Rational lo = d.min + Rational(box) * d.epsilon;
                Rational hi = d.min + Rational(box + 1) * d.epsilon;
                bool in_box = lo <= v && (box + 1 == d.boxes ? v <= d.max : v < hi);
                boxes_ok = boxes_ok && in_box;
            }
        }
        ok = r.plans.size() >= 2 && tuples.size() == r.plans.size() && boxes_ok;
        if (!ok)
            note += " [plans " + std::to_string(r.plans.size()) + ", tuples " +
                    std::to_string(tuples.size()) + "]";
    } catch (const std::exception& e) {
        note += std::string(" [error: ") + e.what() + "]";
    }
    report(6, ok && elapsed_ms(start) <= 180000, note, elapsed_ms(start));
}

// --- criterion 7: randomized property suites ---------------------------------
void criterion_7() {
    auto start = Clock::now();
    bplan_tests::PropertyOutcome out = bplan_tests::run_property_suite(200, 70000);
    bool ok = out.ok() && out.instances == 200 && elapsed_ms(start) <= 10 * 60 * 1000;
    report(7,
           ok,
           "property suites on 200 randomized instances (" +
               std::to_string(out.models_checked) + " models checked)" +
               (out.ok() ? "" : " [" + out.failure + "]"),
           elapsed_ms(start));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    if (failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
