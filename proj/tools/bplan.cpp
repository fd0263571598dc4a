// bplan: diverse planning over user-configured behaviour spaces.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "bplan/metrics.hpp"
#include "bplan/run.hpp"

namespace {

using namespace bplan;

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

struct SolveArgs {
    run::RunConfig cfg;
    double quality = 0;
    long long cost_bound = -1;
    long long assume_length = -1;
    std::string output;
};

int cmd_solve(SolveArgs& args) {
    if (args.quality > 0) args.cfg.quality = Rational::from_double(args.quality);
    if (args.cost_bound >= 0) args.cfg.cost_bound = args.cost_bound;
    if (args.assume_length >= 0) args.cfg.assume_length = args.assume_length;
    run::DiversityReport report = run::run_solve(args.cfg);
    write_output(args.output, report.to_json().dump(2) + "\n");
    if (!report.error.empty()) std::cerr << "bplan: " << report.error << "\n";
    return run::exit_code_for(report);
}

int cmd_validate(const run::RunConfig& cfg, const std::string& report_path) {
    run::DiversityReport report = run::DiversityReport::from_json(load_json(report_path));
    std::string err = run::verify_report(cfg, report);
    if (!err.empty()) {
        std::cerr << "validate: " << err << "\n";
        return 4;
    }
    std::cout << "report ok: " << report.plans.size() << " valid plans, behaviour count "
              << report.behaviour_count << "\n";
    return 0;
}

struct OracleArgs {
    run::RunConfig cfg;
    int horizon = 0;
    long long cost_bound = -1;
    size_t node_cap = 2000000;
    std::string output;
    std::string dump_ground;
};

int cmd_oracle(const OracleArgs& args) {
    pddl::DomainModel dom = pddl::parse_domain_file(args.cfg.domain_path);
    pddl::ProblemModel prob = pddl::parse_problem_file(args.cfg.problem_path, dom);
    pddl::FeatureConfig features;
    if (!args.cfg.features_path.empty())
        features = pddl::parse_feature_config_file(args.cfg.features_path);
    if (features.soft_goals) prob.mode = pddl::Mode::Osp;
    ground::GroundTask task = ground::ground(dom, prob);
    if (!features.utilities.empty()) ground::attach_utilities(task, features.utilities);
    dims::BehaviourSpace space = dims::build_behaviour_space(features, task);

    if (!args.dump_ground.empty()) write_output(args.dump_ground, ground::dump(task));

    long long c = args.cost_bound >= 0 ? args.cost_bound : args.horizon;
    metrics::OracleOptions opts;
    opts.node_cap = args.node_cap;
    std::vector<ground::Plan> plans = metrics::oracle_enumerate(task, args.horizon, c, opts);

    nlohmann::json out;
    out["horizon"] = args.horizon;
    out["cost_bound"] = c;
    out["plans"] = nlohmann::json::array();
    std::vector<dims::Behaviour> behaviours;
    for (size_t i = 0; i < plans.size(); ++i) {
        nlohmann::json pj;
        pj["id"] = "o" + std::to_string(i);
        pj["actions"] = nlohmann::json::array();
        for (int aid : plans[i].actions) {
            const auto& a = task.actions[aid];
            nlohmann::json aj;
            aj["name"] = a.schema;
            aj["args"] = a.objects;
            pj["actions"].push_back(aj);
        }
        pj["cost"] = metrics::compute_plan_cost(plans[i]);
        if (!space.empty()) {
            ground::StateTrace trace = metrics::validate_plan(task, plans[i]);
            dims::Behaviour b = dims::plan_behaviour(space, task, plans[i], trace);
            pj["behaviour"] = dims::behaviour_to_json(space, task, b);
            behaviours.push_back(b);
        }
        out["plans"].push_back(pj);
    }
    out["plan_count"] = plans.size();
    if (!space.empty()) out["behaviour_count"] = dims::behaviour_count(behaviours);
    write_output(args.output, out.dump(2) + "\n");
    return 0;
}

int cmd_bench(const std::string& suite, int jobs, const std::string& per_task,
              const std::string& aggregate) {
    run::BenchResult result = run::run_bench(suite, jobs);
    if (!per_task.empty()) write_output(per_task, result.per_task_csv());
    write_output(aggregate, result.aggregate_csv());
    return 0;
}

int cmd_grid(const std::string& report_path, const std::string& dims_pair,
             const std::string& output) {
    run::DiversityReport report = run::DiversityReport::from_json(load_json(report_path));
    auto comma = dims_pair.find(',');
    if (comma == std::string::npos)
        throw std::runtime_error("--dims expects two comma-separated indices, e.g. 0,1");
    size_t i = std::stoul(dims_pair.substr(0, comma));
    size_t j = std::stoul(dims_pair.substr(comma + 1));
    write_output(output, run::render_grid(report, i, j));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"diverse planning toolkit over behaviour spaces"};
    app.require_subcommand(1);

    // --- solve ---
    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "generate a diverse plan set");
    solve->add_option("domain", solve_args.cfg.domain_path, "domain PDDL file")->required();
    solve->add_option("problem", solve_args.cfg.problem_path, "problem PDDL file")->required();
    solve->add_option("--features", solve_args.cfg.features_path,
                      "feature configuration JSON (dimensions, AddInfo)");
    solve->add_option("--k", solve_args.cfg.k, "number of plans to generate");
    solve->add_option("--quality", solve_args.quality, "relative quality bound q (c = round(q*l))");
    solve->add_option("--cost-bound", solve_args.cost_bound, "explicit cost bound c");
    solve->add_option("--assume-length", solve_args.assume_length,
                      "skip the length search and use this optimal length");
    solve->add_option("--timeout", solve_args.cfg.timeout_s, "wall-clock budget in seconds");
    solve->add_option("--memory", solve_args.cfg.memory_mb, "memory budget in MB");
    solve->add_option("--seed", solve_args.cfg.seed, "solver random seed");
    solve->add_flag("--naive", solve_args.cfg.naive,
                    "generate with an empty behaviour space (plan forbidding only)");
    solve->add_option("--solver-cmd", solve_args.cfg.solver_cmd,
                      "external SMT-LIB solver command (default: built-in engine)");
    solve->add_flag("--solver-timeout-option", solve_args.cfg.solver_timeout_option,
                    "send (set-option :timeout ms) before each external check");
    solve->add_option("--max-horizon", solve_args.cfg.max_horizon,
                      "horizon cap for the optimal-length search");
    solve->add_option("--output", solve_args.output, "report output path (default stdout)");

    // --- validate ---
    run::RunConfig val_cfg;
    std::string val_report;
    auto* validate = app.add_subcommand("validate", "re-validate a report's plans and BC");
    validate->add_option("domain", val_cfg.domain_path)->required();
    validate->add_option("problem", val_cfg.problem_path)->required();
    validate->add_option("report", val_report, "report JSON produced by solve")->required();
    validate->add_option("--features", val_cfg.features_path);

    // --- oracle ---
    OracleArgs oracle_args;
    auto* oracle = app.add_subcommand("oracle", "brute-force enumeration of all plans");
    oracle->add_option("domain", oracle_args.cfg.domain_path)->required();
    oracle->add_option("problem", oracle_args.cfg.problem_path)->required();
    oracle->add_option("--features", oracle_args.cfg.features_path);
    oracle->add_option("--horizon", oracle_args.horizon, "step bound")->required();
    oracle->add_option("--cost-bound", oracle_args.cost_bound, "cost bound (default horizon)");
    oracle->add_option("--node-cap", oracle_args.node_cap, "search node cap");
    oracle->add_option("--output", oracle_args.output);
    oracle->add_option("--dump-ground", oracle_args.dump_ground,
                       "also dump the ground task (line-oriented text)");

    // --- bench ---
    std::string bench_suite, bench_per_task, bench_aggregate;
    int bench_jobs = 1;
    auto* bench = app.add_subcommand("bench", "run a suite of run configs, fbi vs naive");
    bench->add_option("suite", bench_suite, "directory of run-config JSON files")->required();
    bench->add_option("--jobs", bench_jobs, "worker pool size");
    bench->add_option("--per-task", bench_per_task, "per-task CSV output path");
    bench->add_option("--output", bench_aggregate, "aggregate CSV output path (default stdout)");

    // --- grid ---
    std::string grid_report, grid_dims = "0,1", grid_output;
    auto* grid = app.add_subcommand("grid", "render a 2D behaviour-space occupancy grid");
    grid->add_option("report", grid_report, "report JSON produced by solve")->required();
    grid->add_option("--dims", grid_dims, "two dimension indices, e.g. 0,1");
    grid->add_option("--output", grid_output);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(solve_args);
        if (validate->parsed()) return cmd_validate(val_cfg, val_report);
        if (oracle->parsed()) return cmd_oracle(oracle_args);
        if (bench->parsed()) return cmd_bench(bench_suite, bench_jobs, bench_per_task,
                                              bench_aggregate);
        if (grid->parsed()) return cmd_grid(grid_report, grid_dims, grid_output);
    } catch (const std::exception& e) {
        std::cerr << "bplan: " << e.what() << "\n";
        return 4;
    }
    return 4;
}
