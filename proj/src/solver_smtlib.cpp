// SMT-LIB v2 backend: talks to an external solver process over stdin/stdout.
// The solver command is whitespace-split and exec'd once per session; a wall
// clock watchdog kills the process when a check exceeds its budget, which
// surfaces as Unknown. A dead or garbled process surfaces as SolverCrash.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstring>
#include <sstream>
#include <vector>

#include "bplan/solver.hpp"

namespace bplan::solver {
namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::string> split_command(const std::string& cmd) {
    std::vector<std::string> out;
    std::istringstream is(cmd);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

void print_expr(std::ostream& os, const LinearExpr& e) {
    const auto& ts = e.terms();
    size_t n = ts.size() + (e.constant() == Rational(0) ? 0 : 1);
    auto print_rat = [&os](const Rational& r) {
        if (r.sign() < 0)
            os << "(- " << (-r).num() << ")";
        else
            os << r.num();
        // emitted as num/den product below when den != 1
    };
    auto print_coeff_var = [&](const Rational& c, int v) {
        if (c == Rational(1)) {
            os << "n" << v;
            return;
        }
        os << "(* ";
        if (c.den() == 1) {
            print_rat(c);
        } else {
            os << "(/ ";
            print_rat(Rational(c.num()));
            os << " " << c.den() << ")";
        }
        os << " n" << v << ")";
    };
    if (n == 0) {
        os << "0";
        return;
    }
    if (n > 1) os << "(+ ";
    bool first = true;
    for (const auto& [v, c] : ts) {
        if (!first) os << " ";
        first = false;
        print_coeff_var(c, v);
    }
    if (e.constant() != Rational(0)) {
        if (!first) os << " ";
        const Rational& r = e.constant();
        if (r.den() == 1) {
            print_rat(r);
        } else {
            os << "(/ ";
            print_rat(Rational(r.num()));
            os << " " << r.den() << ")";
        }
    }
    if (n > 1) os << ")";
}

void print_formula(std::ostream& os, const Formula& f) {
    switch (f->kind) {
        case FKind::True: os << "true"; return;
        case FKind::False: os << "false"; return;
        case FKind::Var: os << "b" << f->var.id; return;
        case FKind::Not:
            os << "(not ";
            print_formula(os, f->kids[0]);
            os << ")";
            return;
        case FKind::And:
        case FKind::Or:
            os << (f->kind == FKind::And ? "(and" : "(or");
            for (const auto& k : f->kids) {
                os << " ";
                print_formula(os, k);
            }
            os << ")";
            return;
        case FKind::Implies:
        case FKind::Iff:
            os << (f->kind == FKind::Implies ? "(=> " : "(= ");
            print_formula(os, f->kids[0]);
            os << " ";
            print_formula(os, f->kids[1]);
            os << ")";
            return;
        case FKind::Cmp: {
            const char* op = f->op == CmpOp::Lt   ? "<"
                             : f->op == CmpOp::Le ? "<="
                             : f->op == CmpOp::Eq ? "="
                             : f->op == CmpOp::Ge ? ">="
                                                  : ">";
            os << "(" << op << " ";
            print_expr(os, f->lhs);
            os << " ";
            if (f->rhs.den() == 1) {
                if (f->rhs.sign() < 0)
                    os << "(- " << (-f->rhs).num() << ")";
                else
                    os << f->rhs.num();
            } else {
                os << "(/ ";
                if (f->rhs.sign() < 0)
                    os << "(- " << -f->rhs.num() << ")";
                else
                    os << f->rhs.num();
                os << " " << f->rhs.den() << ")";
            }
            os << ")";
            return;
        }
    }
}

// Minimal s-expression reader for (get-value ...) answers.
struct Sexp {
    std::string atom;
    std::vector<Sexp> kids;
    bool is_atom() const { return kids.empty() && !atom.empty(); }
};

Sexp parse_sexp(const std::string& text, size_t& pos) {
    auto skip_ws = [&] {
        while (pos < text.size() && (std::isspace(static_cast<unsigned char>(text[pos])))) ++pos;
    };
    skip_ws();
    Sexp s;
    if (pos >= text.size()) return s;
    if (text[pos] == '(') {
        ++pos;
        for (;;) {
            skip_ws();
            if (pos >= text.size()) break;
            if (text[pos] == ')') {
                ++pos;
                break;
            }
            s.kids.push_back(parse_sexp(text, pos));
        }
        return s;
    }
    size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')')
        ++pos;
    s.atom = text.substr(start, pos - start);
    return s;
}

Rational value_from_sexp(const Sexp& s) {
    if (s.is_atom()) return Rational::parse(s.atom);
    if (!s.kids.empty() && s.kids[0].atom == "-") return -value_from_sexp(s.kids[1]);
    if (!s.kids.empty() && s.kids[0].atom == "/")
        return value_from_sexp(s.kids[1]) / value_from_sexp(s.kids[2]);
    throw SolverCrash("unparseable numeric value from solver");
}

class SmtLibSession final : public Session {
public:
    explicit SmtLibSession(const SolverConfig& cfg) : config_(cfg) {
        spawn();
        send("(set-option :print-success false)\n(set-option :produce-models true)\n");
        send("(set-logic ALL)\n");
        if (config_.seed != 0) {
            send("(set-option :random-seed " + std::to_string(config_.seed) + ")\n");
        }
    }

    ~SmtLibSession() override { shutdown(); }

    BoolVar new_bool(const std::string&) override {
        int id = num_bools_++;
        send("(declare-const b" + std::to_string(id) + " Bool)\n");
        return BoolVar{id};
    }

    NumVar new_num(const std::string&, NumKind kind) override {
        int id = static_cast<int>(num_kinds_.size());
        num_kinds_.push_back(kind);
        send(std::string("(declare-const n") + std::to_string(id) +
             (kind == NumKind::Integer ? " Int)\n" : " Real)\n"));
        return NumVar{id};
    }

    void assert_formula(const Formula& f) override {
        assertions_.push_back(f);
        last_result_.reset();
        std::ostringstream os;
        os << "(assert ";
        print_formula(os, f);
        os << ")\n";
        send(os.str());
    }

    CheckResult check_sat(const Budget& budget) override {
        std::optional<Clock::time_point> deadline;
        if (budget.wall) deadline = Clock::now() + *budget.wall;
        if (budget.wall && config_.use_timeout_option)
            send("(set-option :timeout " + std::to_string(budget.wall->count()) + ")\n");
        send("(check-sat)\n");
        std::string answer;
        if (!read_token(answer, deadline)) {
            // Watchdog expiry: the process is killed, the budget was exhausted.
            kill_process();
            last_result_ = CheckResult::Unknown;
            return CheckResult::Unknown;
        }
        CheckResult r;
        if (answer == "sat")
            r = CheckResult::Sat;
        else if (answer == "unsat")
            r = CheckResult::Unsat;
        else if (answer == "unknown")
            r = CheckResult::Unknown;
        else
            throw SolverCrash("unexpected solver answer: " + answer);
        last_result_ = r;
        return r;
    }

    SolverModel get_model() override {
        if (!last_result_ || *last_result_ != CheckResult::Sat)
            throw SolverContractError("get_model called without a preceding sat");
        SolverModel m;
        m.bools.assign(num_bools_, 0);
        m.nums.assign(num_kinds_.size(), Rational(0));
        const int chunk = 64;
        for (int base = 0; base < num_bools_; base += chunk) {
            std::ostringstream os;
            os << "(get-value (";
            for (int i = base; i < std::min(num_bools_, base + chunk); ++i) os << "b" << i << " ";
            os << "))\n";
            send(os.str());
            read_values(m);
        }
        for (size_t base = 0; base < num_kinds_.size(); base += chunk) {
            std::ostringstream os;
            os << "(get-value (";
            for (size_t i = base; i < std::min(num_kinds_.size(), base + chunk); ++i)
                os << "n" << i << " ";
            os << "))\n";
            send(os.str());
            read_values(m);
        }
        return m;
    }

    int num_assertions() const override { return static_cast<int>(assertions_.size()); }
    const std::vector<Formula>& assertions() const override { return assertions_; }
    std::string backend_name() const override { return "smtlib:" + config_.command; }

private:
    void spawn() {
        // A dead solver must surface as SolverCrash from write(), not SIGPIPE.
        static const bool sigpipe_ignored = [] {
            signal(SIGPIPE, SIG_IGN);
            return true;
        }();
        (void)sigpipe_ignored;
        std::vector<std::string> args = split_command(config_.command);
        if (args.empty()) throw SolverCrash("empty solver command");
        int to_child[2], from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0)
            throw SolverCrash("pipe creation failed");
        pid_ = fork();
        if (pid_ < 0) throw SolverCrash("fork failed");
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            std::vector<char*> argv;
            argv.reserve(args.size() + 1);
            for (auto& a : args) argv.push_back(a.data());
            argv.push_back(nullptr);
            execvp(argv[0], argv.data());
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        in_fd_ = to_child[1];
        out_fd_ = from_child[0];
    }

    void send(const std::string& text) {
        if (pid_ < 0) throw SolverCrash("solver process is gone");
        const char* p = text.data();
        size_t left = text.size();
        while (left > 0) {
            ssize_t w = write(in_fd_, p, left);
            if (w < 0) {
                if (errno == EINTR) continue;
                throw SolverCrash("write to solver failed (process died?)");
            }
            p += w;
            left -= static_cast<size_t>(w);
        }
    }

    // Reads the next whitespace-delimited token; false on watchdog expiry.
    bool read_token(std::string& out, std::optional<Clock::time_point> deadline) {
        out.clear();
        for (;;) {
            while (buf_pos_ < buffer_.size() &&
                   std::isspace(static_cast<unsigned char>(buffer_[buf_pos_])))
                ++buf_pos_;
            size_t end = buf_pos_;
            while (end < buffer_.size() &&
                   !std::isspace(static_cast<unsigned char>(buffer_[end])))
                ++end;
            if (end > buf_pos_ && end < buffer_.size()) {
                out = buffer_.substr(buf_pos_, end - buf_pos_);
                buf_pos_ = end;
                return true;
            }
            if (!fill_buffer(deadline)) return false;
        }
    }

    // Reads one balanced s-expression (for get-value replies).
    std::string read_sexp_text() {
        int depth = 0;
        bool started = false;
        std::string out;
        for (;;) {
            if (buf_pos_ >= buffer_.size()) {
                if (!fill_buffer(std::nullopt)) throw SolverCrash("solver closed the stream");
                continue;
            }
            char c = buffer_[buf_pos_++];
            if (!started) {
                if (std::isspace(static_cast<unsigned char>(c))) continue;
                if (c != '(') throw SolverCrash(std::string("expected value list, got: ") + c);
                started = true;
            }
            out += c;
            if (c == '(') ++depth;
            if (c == ')') {
                --depth;
                if (depth == 0) return out;
            }
        }
    }

    bool fill_buffer(std::optional<Clock::time_point> deadline) {
        if (buf_pos_ > 0) {
            buffer_.erase(0, buf_pos_);
            buf_pos_ = 0;
        }
        for (;;) {
            int timeout_ms = -1;
            if (deadline) {
                auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*deadline -
                                                                                  Clock::now());
                timeout_ms = static_cast<int>(std::max<long long>(0, left.count()));
                if (timeout_ms == 0) return false;
            }
            pollfd pfd{out_fd_, POLLIN, 0};
            int pr = poll(&pfd, 1, timeout_ms);
            if (pr == 0) return false;  // budget expired
            if (pr < 0) {
                if (errno == EINTR) continue;
                throw SolverCrash("poll on solver output failed");
            }
            char chunk[4096];
            ssize_t r = read(out_fd_, chunk, sizeof chunk);
            if (r < 0) {
                if (errno == EINTR) continue;
                throw SolverCrash("read from solver failed");
            }
            if (r == 0) throw SolverCrash("solver process exited unexpectedly");
            buffer_.append(chunk, static_cast<size_t>(r));
            return true;
        }
    }

    void read_values(SolverModel& m) {
        std::string text = read_sexp_text();
        if (text.find("error") != std::string::npos)
            throw SolverCrash("solver reported an error: " + text);
        size_t pos = 0;
        Sexp root = parse_sexp(text, pos);
        for (const Sexp& pair : root.kids) {
            if (pair.kids.size() != 2 || !pair.kids[0].is_atom()) continue;
            const std::string& name = pair.kids[0].atom;
            const Sexp& val = pair.kids[1];
            if (name.size() < 2) continue;
            int id = std::atoi(name.c_str() + 1);
            if (name[0] == 'b') {
                m.bools.at(id) = val.atom == "true" ? 1 : 0;
            } else if (name[0] == 'n') {
                m.nums.at(id) = value_from_sexp(val);
            }
        }
    }

    void kill_process() {
        if (pid_ < 0) return;
        kill(pid_, SIGKILL);
        waitpid(pid_, nullptr, 0);
        close(in_fd_);
        close(out_fd_);
        pid_ = -1;
    }

    void shutdown() {
        if (pid_ < 0) return;
        // Polite exit first, then the axe.
        ssize_t ignored = write(in_fd_, "(exit)\n", 7);
        (void)ignored;
        close(in_fd_);
        for (int i = 0; i < 50; ++i) {
            int status = 0;
            if (waitpid(pid_, &status, WNOHANG) == pid_) {
                close(out_fd_);
                pid_ = -1;
                return;
            }
            usleep(10000);
        }
        kill(pid_, SIGKILL);
        waitpid(pid_, nullptr, 0);
        close(out_fd_);
        pid_ = -1;
    }

    SolverConfig config_;
    pid_t pid_ = -1;
    int in_fd_ = -1, out_fd_ = -1;
    std::string buffer_;
    size_t buf_pos_ = 0;
    int num_bools_ = 0;
    std::vector<NumKind> num_kinds_;
    std::vector<Formula> assertions_;
    std::optional<CheckResult> last_result_;
};

}  // namespace

std::unique_ptr<Session> make_internal_session(const SolverConfig& cfg);

std::unique_ptr<Session> make_session(const SolverConfig& config) {
    if (config.command.empty()) return make_internal_session(config);
    return std::make_unique<SmtLibSession>(config);
}

}  // namespace bplan::solver
