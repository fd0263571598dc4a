#include <random>

#include "doctest.h"
#include "property_suite.hpp"

using namespace bplan;
using namespace bplan_tests;

TEST_CASE("randomized cross-module property suite") {
    PropertyOutcome out = run_property_suite(200, 90000);
    INFO(out.failure);
    CHECK(out.ok());
    CHECK(out.instances == 200);
    // The generator must actually exercise the pipeline, not just build
    // unsolvable tasks.
    CHECK(out.solved_instances > 50);
    CHECK(out.models_checked > 200);
}

TEST_CASE("stability distance is a pseudometric on random plans") {
    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        ground::Plan a, b;
        int la = rng() % 6, lb = rng() % 6;
        for (int j = 0; j < la; ++j) a.actions.push_back(rng() % 5);
        for (int j = 0; j < lb; ++j) b.actions.push_back(rng() % 5);
        CHECK(metrics::stability_distance(a, a) == Rational(0));
        CHECK(metrics::stability_distance(a, b) == metrics::stability_distance(b, a));
        Rational d = metrics::stability_distance(a, b);
        CHECK(d >= Rational(0));
        CHECK(d <= Rational(1));
    }
}

TEST_CASE("reachability is sound for oracle-enumerated plans") {
    std::mt19937 rng(123);
    for (int i = 0; i < 40; ++i) {
        ground::GroundTask task = random_task(rng);
        std::vector<bool> reach = ground::reachable_atoms(task);
        std::vector<ground::Plan> plans;
        try {
            metrics::OracleOptions opts;
            opts.node_cap = 20000;
            plans = metrics::oracle_enumerate(task, 3, 3, opts);
        } catch (const metrics::OracleCapExceeded&) {
            continue;
        }
        for (const auto& p : plans) {
            ground::StateTrace trace = metrics::validate_plan(task, p);
            for (const auto& state : trace)
                for (size_t atom = 0; atom < state.atoms.size(); ++atom)
                    if (state.atoms[atom]) CHECK(reach[atom]);
        }
    }
}

TEST_CASE("oracle completeness: planner output is a subset of oracle output") {
    std::mt19937 rng(321);
    int compared = 0;
    for (int i = 0; i < 30; ++i) {
        ground::GroundTask task = random_task(rng);
        dims::BehaviourSpace space;
        pddl::FeatureConfig cfg;
        cfg.dimensions.push_back({pddl::DimensionKind::CostBound, {}, "", {}, {}, {}, {}});
        space = dims::build_behaviour_space(cfg, task);
        std::vector<ground::Plan> oracle_plans;
        try {
            metrics::OracleOptions opts;
            opts.node_cap = 20000;
            oracle_plans = metrics::oracle_enumerate(task, 3, 3, opts);
        } catch (const metrics::OracleCapExceeded&) {
            continue;
        }
        planner::FbiOptions opts;
        opts.horizon = 3;
        opts.cost_bound = 3;
        planner::FbiResult r = planner::fbi_k(task, space, 6, opts);
        for (const auto& e : r.plans) {
            bool found = std::find(oracle_plans.begin(), oracle_plans.end(), e.plan) !=
                         oracle_plans.end();
            CHECK(found);
            ++compared;
        }
    }
    CHECK(compared > 20);
}

TEST_CASE("fbi exhaustion matches the oracle's behaviour count on random tasks") {
    std::mt19937 rng(777);
    int compared = 0;
    for (int i = 0; i < 40; ++i) {
        ground::GroundTask task = random_task(rng);
        dims::BehaviourSpace space;
        try {
            space = random_space(rng, task);
        } catch (const std::exception&) {
            continue;
        }
        const int horizon = 3;
        std::vector<ground::Plan> oracle_plans;
        try {
            metrics::OracleOptions opts;
            opts.node_cap = 50000;
            oracle_plans = metrics::oracle_enumerate(task, horizon, horizon, opts);
        } catch (const metrics::OracleCapExceeded&) {
            continue;
        }
        std::set<dims::Behaviour> oracle_behaviours;
        bool extraction_ok = true;
        try {
            for (const auto& p : oracle_plans) {
                ground::StateTrace trace = metrics::validate_plan(task, p);
                oracle_behaviours.insert(dims::plan_behaviour(space, task, p, trace));
            }
        } catch (const dims::DimensionError&) {
            // a random box range can fail to cover a plan's final value;
            // generation would be constrained to the range, so skip
            extraction_ok = false;
        }
        if (!extraction_ok) continue;
        planner::FbiOptions opts;
        opts.horizon = horizon;
        opts.cost_bound = horizon;
        planner::FbiResult r =
            planner::fbi(task, space, static_cast<long long>(oracle_behaviours.size()) + 2, opts);
        REQUIRE(r.stop == planner::StopReason::Exhausted);
        REQUIRE(r.behaviour_count == static_cast<long long>(oracle_behaviours.size()));
        ++compared;
    }
    CHECK(compared > 15);
}

TEST_CASE("monotone horizon on random solvable instances") {
    std::mt19937 rng(555);
    int exercised = 0;
    for (int i = 0; i < 25; ++i) {
        ground::GroundTask task = random_task(rng);
        bool seen_sat = false;
        for (int n = 0; n <= 4; ++n) {
            auto session = solver::make_session();
            encode::encode_task(task, n, *session);
            bool sat =
                session->check_sat(solver::Budget::unlimited()) == solver::CheckResult::Sat;
            if (seen_sat) {
                CHECK(sat);
                ++exercised;
            }
            if (sat) seen_sat = true;
        }
    }
    CHECK(exercised > 10);
}
