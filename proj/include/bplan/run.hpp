#ifndef BPLAN_RUN_HPP
#define BPLAN_RUN_HPP

#include <optional>
#include <string>
#include <vector>

#include "bplan/planner.hpp"
#include "json.hpp"

namespace bplan::run {

struct RunConfig {
    std::string domain_path;
    std::string problem_path;
    std::string features_path;

    // Overrides of the feature-config file (0 / nullopt = take from file).
    long long k = 0;
    std::optional<Rational> quality;
    std::optional<long long> cost_bound;
    std::optional<long long> assume_length;  // cached optimal length for q*l

    double timeout_s = 0;  // 0 = unlimited
    size_t memory_mb = 0;  // 0 = unlimited
    unsigned seed = 0;
    bool naive = false;  // generate with an empty behaviour space
    std::string solver_cmd;
    bool solver_timeout_option = false;  // emit (set-option :timeout) per check
    int max_horizon = 50;
};

struct ReportPlan {
    std::string id;
    std::vector<std::string> action_names;  // canonical schema(args)
    std::vector<int> slots;
    long long cost = 0;
    nlohmann::json behaviour;
    std::optional<double> utility;
    char phase = 'b';
    long long found_ms = 0;
};

struct DiversityReport {
    std::string status = "error";  // solved | exhausted | budget | error
    std::string error;
    std::string mode;
    long long k = 0;
    std::optional<long long> optimal_length;
    std::optional<double> quality;
    long long cost_bound = 0;
    int horizon = 0;
    bool naive = false;
    nlohmann::json dimensions = nlohmann::json::array();
    std::vector<ReportPlan> plans;
    long long behaviour_count = 0;
    std::optional<double> maxsum_stability;
    nlohmann::json timings_ms = nlohmann::json::object();
    std::string solver_backend;

    nlohmann::json to_json() const;
    static DiversityReport from_json(const nlohmann::json& j);
};

// Exit codes: 0 solved, 2 exhausted, 3 budget, 4 input error.
int exit_code_for(const DiversityReport& report);

// Full pipeline: parse -> ground -> length search -> c -> fbi_k -> validate
// -> report. Budget breaches yield a partial report, never a crash.
DiversityReport run_solve(const RunConfig& cfg);

// Re-validates every plan of a report against the task and recomputes the
// behaviour count; returns an error message or empty on success.
std::string verify_report(const RunConfig& cfg, const DiversityReport& report);

struct BenchRow {
    std::string task;
    std::string mode;  // fbi | naive
    long long k = 0;
    std::string q;  // "-" when an explicit cost bound was used
    std::string status;
    long long bc = 0;
    long long plans = 0;
    long long total_ms = 0;
};

struct BenchResult {
    std::vector<BenchRow> rows;
    // aggregate per (mode, k, q): coverage (solved or exhausted with >= 1
    // plan) and summed behaviour count
    std::string per_task_csv() const;
    std::string aggregate_csv() const;
};

// Runs every *.json run config under suite_dir in both fbi and naive modes
// with a bounded worker pool; one task failing never fails the suite.
BenchResult run_bench(const std::string& suite_dir, int jobs = 1);

// 2D occupancy grid over two dimensions of a report, as CSV. Axes carry the
// full materialised value domain; a goal_order axis with more than 4 goals is
// refused and rendered as a pairwise-matrix listing instead.
std::string render_grid(const DiversityReport& report, size_t dim_i, size_t dim_j);

}  // namespace bplan::run

#endif
