#ifndef BPLAN_SOLVER_HPP
#define BPLAN_SOLVER_HPP

#include <chrono>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bplan/formula.hpp"

namespace bplan::solver {

enum class CheckResult { Sat, Unsat, Unknown };

// Wall-clock plus (approximate) memory budget for one check_sat call.
struct Budget {
    std::optional<std::chrono::milliseconds> wall;
    std::optional<std::size_t> memory_mb;

    static Budget unlimited() { return {}; }
    static Budget wall_ms(long long ms) {
        Budget b;
        b.wall = std::chrono::milliseconds(ms);
        return b;
    }
};

// The backend died or misbehaved; distinct from Unknown on purpose.
struct SolverCrash : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// API misuse (e.g. get_model without a preceding sat).
struct SolverContractError : std::logic_error {
    using std::logic_error::logic_error;
};

// One constraint-solving session. Assertions are monotone: there is no
// retraction; callers that need a weaker formula open a fresh session.
// A session is strictly sequential; distinct sessions are independent.
class Session {
public:
    virtual ~Session() = default;

    virtual BoolVar new_bool(const std::string& name) = 0;
    virtual NumVar new_num(const std::string& name, NumKind kind) = 0;

    virtual void assert_formula(const Formula& f) = 0;
    virtual CheckResult check_sat(const Budget& budget) = 0;
    virtual SolverModel get_model() = 0;

    virtual int num_assertions() const = 0;
    // Assertions retained verbatim so models can be re-checked independently.
    virtual const std::vector<Formula>& assertions() const = 0;

    virtual std::string backend_name() const = 0;
};

struct SolverConfig {
    // Empty command = built-in engine; otherwise an SMT-LIB v2 solver command
    // line, e.g. "z3 -in" or "cvc5 --incremental --lang smt2".
    std::string command;
    unsigned seed = 0;
    // Emit (set-option :timeout <ms>) before each check for solvers that
    // support it; the wall-clock watchdog applies either way.
    bool use_timeout_option = false;
};

std::unique_ptr<Session> make_session(const SolverConfig& config = {});

// Re-evaluates every assertion of the session under the model. Returns the
// index of the first violated assertion, or -1 if all hold.
int first_violated_assertion(const Session& session, const SolverModel& model);

}  // namespace bplan::solver

#endif
