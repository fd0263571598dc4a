#include "bplan/run.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "bplan/metrics.hpp"

namespace bplan::run {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {
using Clock = std::chrono::steady_clock;

long long ms_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

json dimension_metadata(const dims::BehaviourSpace& space, const ground::GroundTask& task,
                        long long cost_bound) {
    json out = json::array();
    for (const auto& d : space.dimensions) {
        json dj;
        dj["kind"] = pddl::dimension_kind_name(d.kind);
        dj["label"] = d.label;
        switch (d.kind) {
            case pddl::DimensionKind::CostBound: dj["c"] = cost_bound; break;
            case pddl::DimensionKind::ResourceUtilisation: dj["resources"] = d.resources; break;
            case pddl::DimensionKind::GoalOrder: {
                std::vector<std::string> goals;
                for (int g : task.goal) goals.push_back(task.atom_names[g]);
                dj["goals"] = goals;
                break;
            }
            case pddl::DimensionKind::UtilityValue: {
                json u = json::object();
                for (size_t gi = 0; gi < task.goal.size(); ++gi)
                    if (d.utilities[gi] != Rational(0))
                        u[task.atom_names[task.goal[gi]]] = d.utilities[gi].to_double();
                dj["utilities"] = u;
                break;
            }
            case pddl::DimensionKind::NumericFluent:
                dj["fluent"] = task.fluent_names[d.fluent];
                dj["min"] = d.min.to_double();
                dj["max"] = d.max.to_double();
                dj["epsilon"] = d.epsilon.to_double();
                dj["boxes"] = d.boxes;
                break;
        }
        out.push_back(dj);
    }
    return out;
}

std::string status_name(planner::StopReason stop, size_t plans, long long k) {
    if (static_cast<long long>(plans) >= k) return "solved";
    switch (stop) {
        case planner::StopReason::Budget: return "budget";
        default: return "exhausted";
    }
}

}  // namespace

json DiversityReport::to_json() const {
    json j;
    j["status"] = status;
    if (!error.empty()) j["error"] = error;
    j["mode"] = mode;
    j["k"] = k;
    if (optimal_length)
        j["optimal_length"] = *optimal_length;
    else
        j["optimal_length"] = nullptr;
    if (quality)
        j["quality"] = *quality;
    else
        j["quality"] = nullptr;
    j["cost_bound"] = cost_bound;
    j["horizon"] = horizon;
    j["naive"] = naive;
    j["dimensions"] = dimensions;
    j["behaviour_count"] = behaviour_count;
    if (maxsum_stability) j["maxsum_stability"] = *maxsum_stability;
    j["timings_ms"] = timings_ms;
    j["solver_backend"] = solver_backend;
    j["plans"] = json::array();
    for (const auto& p : plans) {
        json pj;
        pj["id"] = p.id;
        pj["actions"] = json::array();
        for (const auto& name : p.action_names) {
            auto open = name.find('(');
            json aj;
            if (open == std::string::npos) {
                aj["name"] = name;
                aj["args"] = json::array();
            } else {
                aj["name"] = name.substr(0, open);
                std::string inner = name.substr(open + 1, name.size() - open - 2);
                json args = json::array();
                std::string cur;
                for (char c : inner) {
                    if (c == ',') {
                        args.push_back(cur);
                        cur.clear();
                    } else {
                        cur += c;
                    }
                }
                if (!cur.empty()) args.push_back(cur);
                aj["args"] = args;
            }
            pj["actions"].push_back(aj);
        }
        pj["slots"] = p.slots;
        pj["cost"] = p.cost;
        pj["behaviour"] = p.behaviour;
        if (p.utility) pj["utility"] = *p.utility;
        pj["phase"] = std::string(1, p.phase);
        pj["found_ms"] = p.found_ms;
        j["plans"].push_back(pj);
    }
    return j;
}

DiversityReport DiversityReport::from_json(const json& j) {
    DiversityReport r;
    r.status = j.value("status", "error");
    r.error = j.value("error", "");
    r.mode = j.value("mode", "");
    r.k = j.value("k", 0LL);
    if (j.contains("optimal_length") && !j["optimal_length"].is_null())
        r.optimal_length = j["optimal_length"].get<long long>();
    if (j.contains("quality") && !j["quality"].is_null())
        r.quality = j["quality"].get<double>();
    r.cost_bound = j.value("cost_bound", 0LL);
    r.horizon = j.value("horizon", 0);
    r.naive = j.value("naive", false);
    if (j.contains("dimensions")) r.dimensions = j["dimensions"];
    r.behaviour_count = j.value("behaviour_count", 0LL);
    if (j.contains("maxsum_stability")) r.maxsum_stability = j["maxsum_stability"].get<double>();
    if (j.contains("timings_ms")) r.timings_ms = j["timings_ms"];
    r.solver_backend = j.value("solver_backend", "");
    if (j.contains("plans")) {
        for (const auto& pj : j["plans"]) {
            ReportPlan p;
            p.id = pj.value("id", "");
            for (const auto& aj : pj["actions"]) {
                std::string name = aj["name"].get<std::string>();
                std::vector<std::string> args;
                for (const auto& a : aj["args"]) args.push_back(a.get<std::string>());
                p.action_names.push_back(pddl::atom_name(pddl::Atom{name, args}));
            }
            if (pj.contains("slots")) p.slots = pj["slots"].get<std::vector<int>>();
            p.cost = pj.value("cost", 0LL);
            if (pj.contains("behaviour")) p.behaviour = pj["behaviour"];
            if (pj.contains("utility")) p.utility = pj["utility"].get<double>();
            std::string phase = pj.value("phase", "b");
            p.phase = phase.empty() ? 'b' : phase[0];
            p.found_ms = pj.value("found_ms", 0LL);
            r.plans.push_back(std::move(p));
        }
    }
    return r;
}

int exit_code_for(const DiversityReport& report) {
    if (report.status == "solved") return 0;
    if (report.status == "exhausted") return 2;
    if (report.status == "budget") return 3;
    return 4;
}

namespace {

struct LoadedTask {
    pddl::DomainModel domain;
    pddl::ProblemModel problem;
    pddl::FeatureConfig features;
    ground::GroundTask task;
    dims::BehaviourSpace space;
    long long k = 0;
};

LoadedTask load_task(const RunConfig& cfg, bool need_k = true) {
    LoadedTask t;
    t.domain = pddl::parse_domain_file(cfg.domain_path);
    t.problem = pddl::parse_problem_file(cfg.problem_path, t.domain);
    t.features = cfg.features_path.empty()
                     ? pddl::FeatureConfig{}
                     : pddl::parse_feature_config_file(cfg.features_path);
    if (t.features.soft_goals) t.problem.mode = pddl::Mode::Osp;
    t.task = ground::ground(t.domain, t.problem);
    // Utilities: the shared map, or the first utility dimension's payload.
    std::map<std::string, Rational> utilities = t.features.utilities;
    if (utilities.empty())
        for (const auto& d : t.features.dimensions)
            if (d.kind == pddl::DimensionKind::UtilityValue && !d.utilities.empty()) {
                utilities = d.utilities;
                break;
            }
    if (!utilities.empty()) ground::attach_utilities(t.task, utilities);
    t.space = dims::build_behaviour_space(t.features, t.task);
    t.k = cfg.k > 0 ? cfg.k : t.features.k.value_or(0);
    if (need_k && t.k < 1)
        throw pddl::ValidationError("k must be given (flag or feature config) and >= 1");
    return t;
}

}  // namespace

DiversityReport run_solve(const RunConfig& cfg) {
    DiversityReport report;
    Clock::time_point t0 = Clock::now();
    try {
        LoadedTask lt = load_task(cfg);
        report.mode = pddl::mode_name(lt.task.mode);
        report.k = lt.k;
        report.naive = cfg.naive;

        planner::BudgetClock clock(cfg.timeout_s, cfg.memory_mb);
        solver::SolverConfig solver_cfg{cfg.solver_cmd, cfg.seed, cfg.solver_timeout_option};

        // Cost bound: explicit c, or round(q * l) with l searched or assumed.
        std::optional<Rational> quality = cfg.quality;
        std::optional<long long> explicit_c = cfg.cost_bound;
        if (!quality && !explicit_c) {
            quality = lt.features.quality_q;
            explicit_c = lt.features.cost_bound;
        }
        if (quality && explicit_c)
            throw pddl::ValidationError("give either a quality factor or a cost bound, not both");
        if (!quality && !explicit_c)
            throw pddl::ValidationError("no cost bound source (quality or cost_bound)");

        long long c;
        long long lsearch_ms = 0;
        if (explicit_c) {
            c = *explicit_c;
        } else {
            report.quality = quality->to_double();
            long long l;
            if (cfg.assume_length) {
                l = *cfg.assume_length;
            } else {
                Clock::time_point ls = Clock::now();
                auto r = planner::find_optimal_length(lt.task, cfg.max_horizon, solver_cfg, clock);
                lsearch_ms = ms_since(ls);
                if (r.status == planner::LengthSearchResult::Status::Budget) {
                    report.status = "budget";
                    report.error = "budget exhausted during the optimal-length search";
                    report.timings_ms["length_search"] = lsearch_ms;
                    report.timings_ms["total"] = ms_since(t0);
                    return report;
                }
                if (r.status == planner::LengthSearchResult::Status::Exhausted) {
                    report.status = "exhausted";
                    report.error = "no plan within the horizon cap (" +
                                   std::to_string(cfg.max_horizon) + ")";
                    report.timings_ms["length_search"] = lsearch_ms;
                    report.timings_ms["total"] = ms_since(t0);
                    return report;
                }
                l = r.length;
            }
            report.optimal_length = l;
            c = planner::compute_cost_bound(*quality, l);
        }
        report.cost_bound = c;
        report.horizon = static_cast<int>(c);
        report.dimensions = dimension_metadata(lt.space, lt.task, c);

        // Generation space: the configured one, or empty under --naive.
        dims::BehaviourSpace naive_space;
        const dims::BehaviourSpace& gen_space = cfg.naive ? naive_space : lt.space;

        planner::FbiOptions fopts;
        fopts.horizon = static_cast<int>(c);
        fopts.cost_bound = c;
        fopts.solver = solver_cfg;
        fopts.clock = &clock;
        planner::FbiResult result = planner::fbi_k(lt.task, gen_space, lt.k, fopts);

        report.timings_ms["length_search"] = lsearch_ms;
        report.timings_ms["behaviour_phase"] = result.behaviour_phase_ms;
        report.timings_ms["plan_phase"] = result.plan_phase_ms;

        // Validate every plan and measure behaviours against the configured
        // space (identical to the generation space unless --naive).
        std::vector<dims::Behaviour> behaviours;
        std::vector<ground::Plan> plans;
        for (size_t i = 0; i < result.plans.size(); ++i) {
            const auto& e = result.plans[i];
            ground::StateTrace trace = metrics::validate_plan(lt.task, e.plan);
            if (metrics::compute_plan_cost(e.plan) > c)
                throw encode::EncodingBug("plan exceeds the cost bound");
            dims::Behaviour b = dims::plan_behaviour(lt.space, lt.task, e.plan, trace);
            behaviours.push_back(b);
            plans.push_back(e.plan);

            ReportPlan rp;
            rp.id = "p" + std::to_string(i);
            for (int aid : e.plan.actions) rp.action_names.push_back(lt.task.actions[aid].name);
            rp.slots = e.slots;
            rp.cost = metrics::compute_plan_cost(e.plan);
            rp.behaviour = dims::behaviour_to_json(lt.space, lt.task, b);
            if (lt.task.mode == pddl::Mode::Osp)
                rp.utility = metrics::compute_utility(lt.task, trace).to_double();
            rp.phase = e.phase;
            rp.found_ms = e.found_ms;
            report.plans.push_back(std::move(rp));
        }
        report.behaviour_count = dims::behaviour_count(behaviours);
        if (!plans.empty())
            report.maxsum_stability =
                metrics::maxsum(plans, metrics::stability_distance).to_double();
        report.solver_backend = cfg.solver_cmd.empty() ? "internal" : "smtlib";
        report.status = status_name(result.stop, result.plans.size(), lt.k);
    } catch (const std::exception& e) {
        report.status = "error";
        report.error = e.what();
    }
    report.timings_ms["total"] = ms_since(t0);
    return report;
}

std::string verify_report(const RunConfig& cfg, const DiversityReport& report) {
    try {
        LoadedTask lt = load_task(cfg, /*need_k=*/false);
        std::vector<dims::Behaviour> behaviours;
        for (const auto& rp : report.plans) {
            ground::Plan plan;
            for (const auto& name : rp.action_names) {
                const ground::GroundAction* a = lt.task.find_action(name);
                if (!a) return "unknown action " + name + " in plan " + rp.id;
                plan.actions.push_back(a->id);
            }
            ground::StateTrace trace = metrics::validate_plan(lt.task, plan);
            behaviours.push_back(dims::plan_behaviour(lt.space, lt.task, plan, trace));
        }
        long long bc = dims::behaviour_count(behaviours);
        if (bc != report.behaviour_count)
            return "behaviour count mismatch: report says " +
                   std::to_string(report.behaviour_count) + ", recomputed " + std::to_string(bc);
        return "";
    } catch (const std::exception& e) {
        return e.what();
    }
}

// ---------------------------------------------------------------------------
// bench harness
namespace {

struct SuiteEntry {
    std::string name;
    RunConfig config;
};

RunConfig config_from_json(const json& j, const fs::path& base) {
    RunConfig cfg;
    auto resolve = [&base](const std::string& p) {
        fs::path path(p);
        return path.is_absolute() ? path.string() : (base / path).string();
    };
    cfg.domain_path = resolve(j.at("domain").get<std::string>());
    cfg.problem_path = resolve(j.at("problem").get<std::string>());
    if (j.contains("features")) cfg.features_path = resolve(j["features"].get<std::string>());
    if (j.contains("k")) cfg.k = j["k"].get<long long>();
    if (j.contains("quality")) cfg.quality = Rational::from_double(j["quality"].get<double>());
    if (j.contains("cost_bound")) cfg.cost_bound = j["cost_bound"].get<long long>();
    if (j.contains("timeout_s")) cfg.timeout_s = j["timeout_s"].get<double>();
    if (j.contains("memory_mb")) cfg.memory_mb = j["memory_mb"].get<size_t>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned>();
    if (j.contains("max_horizon")) cfg.max_horizon = j["max_horizon"].get<int>();
    if (j.contains("solver_cmd")) cfg.solver_cmd = j["solver_cmd"].get<std::string>();
    return cfg;
}

std::string quality_tag(const RunConfig& cfg, const DiversityReport& report) {
    if (report.quality) {
        std::ostringstream os;
        os << *report.quality;
        return os.str();
    }
    (void)cfg;
    return "-";
}

}  // namespace

BenchResult run_bench(const std::string& suite_dir, int jobs) {
    std::vector<SuiteEntry> entries;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(suite_dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        std::ifstream in(f);
        json j;
        try {
            in >> j;
            entries.push_back({f.stem().string(), config_from_json(j, f.parent_path())});
        } catch (const std::exception& err) {
            entries.push_back({f.stem().string(), RunConfig{}});
            entries.back().config.domain_path = "";  // marks a broken config
        }
    }

    struct Job {
        size_t entry;
        bool naive;
    };
    std::vector<Job> queue;
    for (size_t i = 0; i < entries.size(); ++i) {
        queue.push_back({i, false});
        queue.push_back({i, true});
    }

    BenchResult result;
    result.rows.resize(queue.size());
    std::mutex mu;
    size_t next = 0;
    auto worker = [&]() {
        for (;;) {
            size_t mine;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next >= queue.size()) return;
                mine = next++;
            }
            const Job& job = queue[mine];
            const SuiteEntry& entry = entries[job.entry];
            BenchRow row;
            row.task = entry.name;
            row.mode = job.naive ? "naive" : "fbi";
            if (entry.config.domain_path.empty()) {
                row.status = "error";
            } else {
                RunConfig cfg = entry.config;
                cfg.naive = job.naive;
                DiversityReport report = run_solve(cfg);
                row.k = report.k;
                row.q = quality_tag(cfg, report);
                row.status = report.status;
                row.bc = report.behaviour_count;
                row.plans = static_cast<long long>(report.plans.size());
                row.total_ms = report.timings_ms.value("total", 0LL);
            }
            result.rows[mine] = row;
        }
    };
    int n_workers = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::sort(result.rows.begin(), result.rows.end(), [](const BenchRow& a, const BenchRow& b) {
        return std::tie(a.task, a.mode) < std::tie(b.task, b.mode);
    });
    return result;
}

std::string BenchResult::per_task_csv() const {
    std::ostringstream os;
    os << "task,mode,k,q,status,behaviour_count,plans,total_ms\n";
    for (const auto& r : rows)
        os << r.task << "," << r.mode << "," << r.k << "," << r.q << "," << r.status << ","
           << r.bc << "," << r.plans << "," << r.total_ms << "\n";
    return os.str();
}

std::string BenchResult::aggregate_csv() const {
    struct Key {
        std::string mode, q;
        long long k;
        bool operator<(const Key& o) const {
            return std::tie(mode, k, q) < std::tie(o.mode, o.k, o.q);
        }
    };
    std::map<Key, std::pair<long long, long long>> agg;  // coverage, sum bc
    for (const auto& r : rows) {
        auto& [coverage, bc] = agg[{r.mode, r.q, r.k}];
        bool covered = (r.status == "solved" || r.status == "exhausted") && r.plans > 0;
        if (covered) {
            ++coverage;
            bc += r.bc;
        }
    }
    std::ostringstream os;
    os << "mode,k,q,coverage,sum_behaviour_count\n";
    for (const auto& [key, val] : agg)
        os << key.mode << "," << key.k << "," << key.q << "," << val.first << "," << val.second
           << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// grid rendering
namespace {

// Readable label of one behaviour value under a dimension's metadata.
std::string value_label(const json& dim_meta, const json& value) {
    std::string kind = dim_meta.value("kind", "");
    if (kind != "goal_order") {
        if (value.is_number_integer()) return std::to_string(value.get<long long>());
        if (value.is_number_float()) {
            std::ostringstream os;
            os << value.get<double>();
            return os.str();
        }
        return value.dump();
    }
    // Reconstruct rank groups from the pair list.
    std::vector<std::string> goals = dim_meta["goals"].get<std::vector<std::string>>();
    std::set<std::string> pairs;
    for (const auto& p : value) pairs.insert(p.get<std::string>());
    auto leq = [&](const std::string& a, const std::string& b) {
        return a == b || pairs.count(a + "<=" + b) > 0;
    };
    std::vector<std::string> remaining = goals;
    std::string label;
    while (!remaining.empty()) {
        std::vector<std::string> front;
        for (const auto& g : remaining) {
            bool minimal = true;
            for (const auto& h : remaining)
                if (!leq(g, h)) {
                    minimal = false;
                    break;
                }
            if (minimal) front.push_back(g);
        }
        if (front.empty()) front.push_back(remaining.front());  // non-preorder fallback
        std::sort(front.begin(), front.end());
        for (size_t i = 0; i < front.size(); ++i) {
            if (!label.empty() && i == 0)
                label += "<";
            else if (i > 0)
                label += "=";
            label += front[i];
        }
        std::vector<std::string> rest;
        for (const auto& g : remaining)
            if (std::find(front.begin(), front.end(), g) == front.end()) rest.push_back(g);
        remaining = rest;
    }
    return label;
}

long long factorial(long long n) {
    long long f = 1;
    for (long long i = 2; i <= n; ++i) f *= i;
    return f;
}

// The full materialised value domain of a dimension, as labels.
std::vector<std::string> axis_labels(const json& dim_meta) {
    std::string kind = dim_meta.value("kind", "");
    std::vector<std::string> out;
    if (kind == "cost_bound") {
        long long c = dim_meta.value("c", 0LL);
        for (long long v = 0; v <= c; ++v) out.push_back(std::to_string(v));
    } else if (kind == "resource_utilisation") {
        long long n = static_cast<long long>(dim_meta["resources"].size());
        for (long long v = 0; v <= n; ++v) out.push_back(std::to_string(v));
    } else if (kind == "numeric_fluent") {
        long long boxes = dim_meta.value("boxes", 0LL);
        for (long long v = 0; v < boxes; ++v) out.push_back(std::to_string(v));
    } else if (kind == "utility_value") {
        std::vector<double> values;
        for (const auto& [key, val] : dim_meta["utilities"].items()) {
            (void)key;
            values.push_back(val.get<double>());
        }
        if (values.size() > 12)
            throw dims::DimensionError("utility axis with more than 12 goals is not materialised");
        std::set<double> sums;
        size_t subsets = size_t{1} << values.size();
        for (size_t mask = 0; mask < subsets; ++mask) {
            double s = 0;
            for (size_t i = 0; i < values.size(); ++i)
                if (mask & (size_t{1} << i)) s += values[i];
            sums.insert(s);
        }
        for (double s : sums) {
            std::ostringstream os;
            os << s;
            out.push_back(os.str());
        }
    } else if (kind == "goal_order") {
        std::vector<std::string> goals = dim_meta["goals"].get<std::vector<std::string>>();
        if (goals.size() > 4)
            throw dims::DimensionError("goal_order axis with more than 4 goals");
        std::sort(goals.begin(), goals.end());
        std::vector<std::string> perm = goals;
        do {
            std::string label;
            for (size_t i = 0; i < perm.size(); ++i) {
                if (i) label += "<";
                label += perm[i];
            }
            out.push_back(label);
        } while (std::next_permutation(perm.begin(), perm.end()));
        std::sort(out.begin(), out.end());
        if (factorial(static_cast<long long>(goals.size())) !=
            static_cast<long long>(out.size()))
            throw dims::DimensionError("internal: permutation axis size mismatch");
    }
    return out;
}

}  // namespace

std::string render_grid(const DiversityReport& report, size_t dim_i, size_t dim_j) {
    if (report.plans.empty()) throw dims::DimensionError("grid over an empty report");
    if (dim_i >= report.dimensions.size() || dim_j >= report.dimensions.size())
        throw dims::DimensionError("dimension index out of range");
    const json& meta_i = report.dimensions[dim_i];
    const json& meta_j = report.dimensions[dim_j];

    auto oversized_order = [](const json& meta) {
        return meta.value("kind", "") == "goal_order" && meta["goals"].size() > 4;
    };
    if (oversized_order(meta_i) || oversized_order(meta_j)) {
        // Pairwise-matrix listing instead of a factorial axis.
        std::ostringstream os;
        os << "plan," << meta_i.value("label", "") << "," << meta_j.value("label", "") << "\n";
        for (const auto& p : report.plans) {
            const json& bi = p.behaviour[meta_i.value("label", "")];
            const json& bj = p.behaviour[meta_j.value("label", "")];
            os << p.id << ",\"" << bi.dump() << "\",\"" << bj.dump() << "\"\n";
        }
        return os.str();
    }

    std::vector<std::string> rows = axis_labels(meta_i);
    std::vector<std::string> cols = axis_labels(meta_j);
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> cells;
    for (const auto& p : report.plans) {
        std::string vi = value_label(meta_i, p.behaviour[meta_i.value("label", "")]);
        std::string vj = value_label(meta_j, p.behaviour[meta_j.value("label", "")]);
        if (std::find(rows.begin(), rows.end(), vi) == rows.end()) rows.push_back(vi);
        if (std::find(cols.begin(), cols.end(), vj) == cols.end()) cols.push_back(vj);
        cells[{vi, vj}].push_back(p.id);
    }
    std::ostringstream os;
    os << meta_i.value("label", "") + "\\" + meta_j.value("label", "");
    for (const auto& c : cols) os << "," << c;
    os << "\n";
    for (const auto& r : rows) {
        os << r;
        for (const auto& c : cols) {
            os << ",";
            auto it = cells.find({r, c});
            if (it != cells.end()) {
                for (size_t i = 0; i < it->second.size(); ++i) {
                    if (i) os << ";";
                    os << it->second[i];
                }
            }
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace bplan::run
