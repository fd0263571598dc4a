// Built-in constraint engine: CDCL search over the boolean structure with a
// simplex-based linear-rational theory for comparison atoms. Formulas arrive
// through Session::assert_formula and are Tseitin-compiled; equality atoms are
// rewritten to a conjunction of <= and >= so that the negation of every theory
// atom is again a single atom.

#include <algorithm>
#include <cassert>
#include <chrono>
#include <map>
#include <random>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "bplan/solver.hpp"

namespace bplan::solver {
namespace {

using Clock = std::chrono::steady_clock;

// ---------------------------------------------------------------------------
// Delta rationals: r + k*delta with delta a positive infinitesimal; strict
// bounds become weak bounds on these.
struct DeltaRat {
    Rational r;
    Rational k;

    bool operator==(const DeltaRat& o) const { return r == o.r && k == o.k; }
    bool operator<(const DeltaRat& o) const { return r < o.r || (r == o.r && k < o.k); }
    bool operator<=(const DeltaRat& o) const { return *this < o || *this == o; }
    bool operator>(const DeltaRat& o) const { return o < *this; }
    bool operator>=(const DeltaRat& o) const { return o <= *this; }

    DeltaRat operator+(const DeltaRat& o) const { return {r + o.r, k + o.k}; }
    DeltaRat operator-(const DeltaRat& o) const { return {r - o.r, k - o.k}; }
    DeltaRat scaled(const Rational& by) const { return {r * by, k * by}; }
};

// Literal encoding: var*2 for positive, var*2+1 for negated.
using Lit = int;
inline int lit_var(Lit l) { return l >> 1; }
inline bool lit_sign(Lit l) { return l & 1; }  // true = negated
inline Lit mk_lit(int var, bool neg) { return var * 2 + (neg ? 1 : 0); }
inline Lit lit_neg(Lit l) { return l ^ 1; }

constexpr int kNoReason = -1;

// ---------------------------------------------------------------------------
// General simplex with Bland's rule over exact rationals; bound trail is
// synchronised with the SAT solver's decision levels.
class Simplex {
public:
    int new_col(bool is_int) {
        int c = static_cast<int>(cols_.size());
        cols_.push_back(Col{});
        cols_.back().is_int = is_int;
        occurrences_.emplace_back();
        return c;
    }

    // Defines slack = sum(coeff * col); slack starts basic.
    void define_slack(int slack, const std::vector<std::pair<int, Rational>>& terms) {
        Row row;
        row.basic = slack;
        DeltaRat beta;
        for (const auto& [c, a] : terms) {
            row.terms.push_back({c, a});
            beta = beta + cols_[c].beta.scaled(a);
        }
        cols_[slack].beta = beta;
        cols_[slack].basic_row = static_cast<int>(rows_.size());
        int ri = static_cast<int>(rows_.size());
        for (const auto& [c, a] : row.terms) occurrences_[c].push_back(ri);
        rows_.push_back(std::move(row));
    }

    struct Conflict {
        std::vector<Lit> reasons;  // literals whose bounds are jointly infeasible
    };

    std::optional<Conflict> assert_upper(int x, const DeltaRat& c, Lit reason) {
        Col& col = cols_[x];
        if (col.has_ub && col.ub <= c) return std::nullopt;
        if (col.has_lb && c < col.lb) {
            Conflict cf;
            if (reason != kNoReason) cf.reasons.push_back(reason);
            if (col.lb_reason != kNoReason) cf.reasons.push_back(col.lb_reason);
            return cf;
        }
        trail_.push_back({x, true, col.has_ub, col.ub, col.ub_reason});
        col.has_ub = true;
        col.ub = c;
        col.ub_reason = reason;
        if (col.basic_row < 0 && col.beta > c) update(x, c);
        dirty_ = true;
        return std::nullopt;
    }

    std::optional<Conflict> assert_lower(int x, const DeltaRat& c, Lit reason) {
        Col& col = cols_[x];
        if (col.has_lb && col.lb >= c) return std::nullopt;
        if (col.has_ub && c > col.ub) {
            Conflict cf;
            if (reason != kNoReason) cf.reasons.push_back(reason);
            if (col.ub_reason != kNoReason) cf.reasons.push_back(col.ub_reason);
            return cf;
        }
        trail_.push_back({x, false, col.has_lb, col.lb, col.lb_reason});
        col.has_lb = true;
        col.lb = c;
        col.lb_reason = reason;
        if (col.basic_row < 0 && col.beta < c) update(x, c);
        dirty_ = true;
        return std::nullopt;
    }

    bool dirty() const { return dirty_; }

    std::optional<Conflict> check() {
        dirty_ = false;
        for (;;) {
            int xi = -1;
            bool below = false;
            for (const Row& row : rows_) {
                const Col& c = cols_[row.basic];
                if (c.has_lb && c.beta < c.lb) {
                    if (xi < 0 || row.basic < xi) {
                        xi = row.basic;
                        below = true;
                    }
                } else if (c.has_ub && c.beta > c.ub) {
                    if (xi < 0 || row.basic < xi) {
                        xi = row.basic;
                        below = false;
                    }
                }
            }
            if (xi < 0) return std::nullopt;
            const Row& row = rows_[cols_[xi].basic_row];
            int xj = -1;
            Rational aij;
            for (const auto& [c, a] : row.terms) {
                const Col& nc = cols_[c];
                bool ok;
                if (below)
                    ok = (a.sign() > 0 && (!nc.has_ub || nc.beta < nc.ub)) ||
                         (a.sign() < 0 && (!nc.has_lb || nc.beta > nc.lb));
                else
                    ok = (a.sign() < 0 && (!nc.has_ub || nc.beta < nc.ub)) ||
                         (a.sign() > 0 && (!nc.has_lb || nc.beta > nc.lb));
                if (ok && (xj < 0 || c < xj)) {
                    xj = c;
                    aij = a;
                }
            }
            if (xj < 0) {
                Conflict cf;
                const Col& bc = cols_[xi];
                Lit base = below ? bc.lb_reason : bc.ub_reason;
                if (base != kNoReason) cf.reasons.push_back(base);
                for (const auto& [c, a] : row.terms) {
                    const Col& nc = cols_[c];
                    bool upper = below ? a.sign() > 0 : a.sign() < 0;
                    Lit rl = upper ? nc.ub_reason : nc.lb_reason;
                    if (rl != kNoReason) cf.reasons.push_back(rl);
                }
                return cf;
            }
            pivot_and_update(xi, xj, below ? cols_[xi].lb : cols_[xi].ub, aij);
        }
    }

    void push_level() { level_marks_.push_back(trail_.size()); }

    void pop_to_level(int level) {
        if (level >= static_cast<int>(level_marks_.size())) return;
        size_t mark = level_marks_[level];
        while (trail_.size() > mark) {
            const BoundRecord& rec = trail_.back();
            Col& col = cols_[rec.var];
            if (rec.is_upper) {
                col.has_ub = rec.had;
                col.ub = rec.old_bound;
                col.ub_reason = rec.old_reason;
            } else {
                col.has_lb = rec.had;
                col.lb = rec.old_bound;
                col.lb_reason = rec.old_reason;
            }
            trail_.pop_back();
        }
        level_marks_.resize(level);
        dirty_ = true;
    }

    bool is_int(int x) const { return cols_[x].is_int; }
    int num_cols() const { return static_cast<int>(cols_.size()); }

    // Concrete rational values: pick one epsilon small enough for every bound.
    std::vector<Rational> concrete_values() const {
        Rational eps(1);
        auto tighten = [&eps](const DeltaRat& v, const DeltaRat& bound, bool upper) {
            Rational dk = upper ? v.k - bound.k : bound.k - v.k;
            if (dk.sign() <= 0) return;
            Rational gap = upper ? bound.r - v.r : v.r - bound.r;
            Rational cand = gap / dk;
            if (cand < eps) eps = cand;
        };
        for (const Col& c : cols_) {
            if (c.has_ub) tighten(c.beta, c.ub, true);
            if (c.has_lb) tighten(c.beta, c.lb, false);
        }
        eps = eps / Rational(2);
        std::vector<Rational> out;
        out.reserve(cols_.size());
        for (const Col& c : cols_) out.push_back(c.beta.r + c.beta.k * eps);
        return out;
    }

private:
    struct Col {
        bool is_int = false;
        bool has_lb = false, has_ub = false;
        DeltaRat lb, ub;
        Lit lb_reason = kNoReason, ub_reason = kNoReason;
        DeltaRat beta;
        int basic_row = -1;  // index into rows_, -1 when nonbasic
    };
    struct Row {
        int basic;
        std::vector<std::pair<int, Rational>> terms;  // over nonbasic cols
    };
    struct BoundRecord {
        int var;
        bool is_upper;
        bool had;
        DeltaRat old_bound;
        Lit old_reason;
    };

    void update(int xj, const DeltaRat& v) {
        DeltaRat theta = v - cols_[xj].beta;
        cols_[xj].beta = v;
        for (int ri : occurrences_[xj]) {
            Row& row = rows_[ri];
            for (const auto& [c, a] : row.terms) {
                if (c == xj) {
                    cols_[row.basic].beta = cols_[row.basic].beta + theta.scaled(a);
                    break;
                }
            }
        }
    }

    void pivot_and_update(int xi, int xj, const DeltaRat& v, const Rational& aij) {
        DeltaRat theta = (v - cols_[xi].beta).scaled(Rational(1) / aij);
        cols_[xi].beta = v;
        cols_[xj].beta = cols_[xj].beta + theta;
        for (int ri : occurrences_[xj]) {
            Row& row = rows_[ri];
            if (row.basic == xi) continue;
            for (const auto& [c, a] : row.terms) {
                if (c == xj) {
                    cols_[row.basic].beta = cols_[row.basic].beta + theta.scaled(a);
                    break;
                }
            }
        }
        pivot(xi, xj, aij);
    }

    // xi leaves the basis, xj enters.
    void pivot(int xi, int xj, const Rational& aij) {
        int ri = cols_[xi].basic_row;
        Row& row = rows_[ri];
        // Solve row (xi = sum terms) for xj.
        std::vector<std::pair<int, Rational>> solved;
        solved.push_back({xi, Rational(1) / aij});
        for (const auto& [c, a] : row.terms)
            if (c != xj) solved.push_back({c, (a / aij) * Rational(-1)});
        row.basic = xj;
        row.terms = solved;
        cols_[xj].basic_row = ri;
        cols_[xi].basic_row = -1;
        // Substitute xj into every other row that mentions it.
        for (int r2 = 0; r2 < static_cast<int>(rows_.size()); ++r2) {
            if (r2 == ri) continue;
            substitute(rows_[r2], xj, solved);
        }
        rebuild_occurrences();
    }

    void substitute(Row& row, int var, const std::vector<std::pair<int, Rational>>& repl) {
        Rational coef;
        bool found = false;
        for (const auto& [c, a] : row.terms) {
            if (c == var) {
                coef = a;
                found = true;
                break;
            }
        }
        if (!found) return;
        std::map<int, Rational> merged;
        for (const auto& [c, a] : row.terms)
            if (c != var) merged[c] += a;
        for (const auto& [c, a] : repl) merged[c] += a * coef;
        row.terms.clear();
        for (const auto& [c, a] : merged)
            if (a != Rational(0)) row.terms.push_back({c, a});
    }

    void rebuild_occurrences() {
        for (auto& o : occurrences_) o.clear();
        for (int i = 0; i < static_cast<int>(rows_.size()); ++i)
            for (const auto& [c, a] : rows_[i].terms) occurrences_[c].push_back(i);
    }

    std::vector<Col> cols_;
    std::vector<Row> rows_;
    std::vector<std::vector<int>> occurrences_;
    std::vector<BoundRecord> trail_;
    std::vector<size_t> level_marks_;
    bool dirty_ = false;
};

// ---------------------------------------------------------------------------
// CDCL core.
enum LB : signed char { kFalse = 0, kTrue = 1, kUndef = 2 };

struct Clause {
    std::vector<Lit> lits;
    double activity = 0.0;
    bool learnt = false;
};

class InternalSession final : public Session {
public:
    explicit InternalSession(const SolverConfig& cfg) : rng_(cfg.seed) {
        true_var_ = new_var();
        pending_units_.push_back(mk_lit(true_var_, false));
    }

    BoolVar new_bool(const std::string&) override { return BoolVar{new_var()}; }

    NumVar new_num(const std::string&, NumKind kind) override {
        int id = static_cast<int>(num_cols_.size());
        num_cols_.push_back(simplex_.new_col(kind == NumKind::Integer));
        return NumVar{id};
    }

    void assert_formula(const Formula& f) override {
        assertions_.push_back(f);
        last_result_.reset();
        assert_root(f);
    }

    CheckResult check_sat(const Budget& budget) override {
        deadline_.reset();
        if (budget.wall) deadline_ = Clock::now() + *budget.wall;
        memory_budget_lits_ = budget.memory_mb
                                  ? std::optional<size_t>(*budget.memory_mb * 1024 * 1024 / 16)
                                  : std::nullopt;
        CheckResult r = solve();
        last_result_ = r;
        return r;
    }

    SolverModel get_model() override {
        if (!last_result_ || *last_result_ != CheckResult::Sat)
            throw SolverContractError("get_model called without a preceding sat");
        return model_;
    }

    int num_assertions() const override { return static_cast<int>(assertions_.size()); }
    const std::vector<Formula>& assertions() const override { return assertions_; }
    std::string backend_name() const override { return "internal"; }

private:
    // ---- variables and clauses ----
    int new_var() {
        int v = static_cast<int>(values_.size());
        values_.push_back(kUndef);
        levels_.push_back(0);
        reasons_.push_back(kNoReason);
        activities_.push_back(0.0);
        phases_.push_back(false);
        atom_of_var_.push_back(-1);
        watches_.emplace_back();
        watches_.emplace_back();
        heap_insert(v);
        return v;
    }

    // Level-0 clause addition with simplification.
    void add_clause_raw(std::vector<Lit> lits) {
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        std::vector<Lit> kept;
        for (size_t i = 0; i < lits.size(); ++i) {
            Lit l = lits[i];
            if (i + 1 < lits.size() && lits[i + 1] == lit_neg(l)) return;  // tautology
            if (value_lit(l) == kTrue && levels_[lit_var(l)] == 0) return;
            if (value_lit(l) == kFalse && levels_[lit_var(l)] == 0) continue;
            kept.push_back(l);
        }
        if (kept.empty()) {
            unsat_flag_ = true;
            return;
        }
        if (kept.size() == 1) {
            pending_units_.push_back(kept[0]);
            return;
        }
        attach_clause(std::move(kept), false);
    }

    int attach_clause(std::vector<Lit> lits, bool learnt) {
        int id = static_cast<int>(clauses_.size());
        total_lits_ += lits.size();
        clauses_.push_back(Clause{std::move(lits), 0.0, learnt});
        watches_[clauses_[id].lits[0]].push_back(id);
        watches_[clauses_[id].lits[1]].push_back(id);
        return id;
    }

    LB value_lit(Lit l) const {
        LB v = static_cast<LB>(values_[lit_var(l)]);
        if (v == kUndef) return kUndef;
        return lit_sign(l) ? (v == kTrue ? kFalse : kTrue) : v;
    }

    // ---- trail ----
    void enqueue(Lit l, int reason) {
        int v = lit_var(l);
        values_[v] = lit_sign(l) ? kFalse : kTrue;
        levels_[v] = current_level();
        reasons_[v] = current_level() == 0 ? kNoReason : reason;
        trail_.push_back(l);
    }

    int current_level() const { return static_cast<int>(level_marks_.size()); }

    void new_decision_level() {
        level_marks_.push_back(trail_.size());
        simplex_.push_level();
    }

    void backtrack(int level) {
        if (current_level() <= level) return;
        size_t mark = level_marks_[level];
        for (size_t i = trail_.size(); i > mark; --i) {
            int v = lit_var(trail_[i - 1]);
            phases_[v] = values_[v] == kTrue;
            values_[v] = kUndef;
            reasons_[v] = kNoReason;
            if (heap_pos_[v] < 0) heap_insert(v);
        }
        trail_.resize(mark);
        prop_head_ = std::min(prop_head_, trail_.size());
        theory_head_ = std::min(theory_head_, trail_.size());
        level_marks_.resize(level);
        simplex_.pop_to_level(level);
    }

    // ---- propagation; returns conflicting clause id or -1 ----
    int propagate() {
        while (prop_head_ < trail_.size()) {
            Lit p = trail_[prop_head_++];
            Lit np = lit_neg(p);
            std::vector<int>& ws = watches_[np];
            size_t keep = 0;
            for (size_t i = 0; i < ws.size(); ++i) {
                int ci = ws[i];
                Clause& c = clauses_[ci];
                if (c.lits[0] == np) std::swap(c.lits[0], c.lits[1]);
                if (value_lit(c.lits[0]) == kTrue) {
                    ws[keep++] = ci;
                    continue;
                }
                bool moved = false;
                for (size_t j = 2; j < c.lits.size(); ++j) {
                    if (value_lit(c.lits[j]) != kFalse) {
                        std::swap(c.lits[1], c.lits[j]);
                        watches_[c.lits[1]].push_back(ci);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[keep++] = ci;
                if (value_lit(c.lits[0]) == kFalse) {
                    for (size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
                    ws.resize(keep);
                    return ci;
                }
                enqueue(c.lits[0], ci);
            }
            ws.resize(keep);
        }
        return -1;
    }

    // ---- theory sync at a propagation fixpoint ----
    std::optional<Simplex::Conflict> theory_sync() {
        while (theory_head_ < trail_.size()) {
            Lit l = trail_[theory_head_++];
            int atom = atom_of_var_[lit_var(l)];
            if (atom < 0) continue;
            const AtomInfo& info = atoms_[atom];
            std::optional<Simplex::Conflict> cf;
            if (!lit_sign(l)) {
                cf = simplex_.assert_upper(info.col, info.bound, l);
            } else {
                DeltaRat lower{info.bound.r, info.bound.k + Rational(1)};
                cf = simplex_.assert_lower(info.col, lower, l);
            }
            if (cf) return cf;
        }
        if (simplex_.dirty()) return simplex_.check();
        return std::nullopt;
    }

    // ---- conflict analysis (first UIP) ----
    void bump_var(int v) {
        activities_[v] += var_inc_;
        if (activities_[v] > 1e100) {
            for (double& a : activities_) a *= 1e-100;
            var_inc_ *= 1e-100;
        }
        if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
    }

    std::pair<std::vector<Lit>, int> analyze(std::vector<Lit> reason_lits) {
        std::vector<Lit> learnt{0};  // slot 0 for the asserting literal
        seen_.resize(values_.size(), 0);
        const long long stamp = ++seen_stamp_;
        auto seen = [&](int v) { return seen_[v] == stamp; };
        int counter = 0;
        size_t idx = trail_.size();
        Lit asserting = -1;

        for (;;) {
            for (Lit q : reason_lits) {
                int v = lit_var(q);
                if (seen(v) || levels_[v] == 0) continue;
                seen_[v] = stamp;
                bump_var(v);
                if (levels_[v] == current_level())
                    ++counter;
                else
                    learnt.push_back(q);
            }
            while (idx > 0 && !seen(lit_var(trail_[idx - 1]))) --idx;
            assert(idx > 0);
            Lit p = trail_[--idx];
            int v = lit_var(p);
            seen_[v] = 0;
            --counter;
            if (counter == 0) {
                asserting = lit_neg(p);
                break;
            }
            int r = reasons_[v];
            assert(r >= 0);
            clauses_[r].activity += clause_inc_;
            reason_lits.clear();
            for (Lit q : clauses_[r].lits)
                if (lit_var(q) != v) reason_lits.push_back(q);
        }
        learnt[0] = asserting;
        int bj = 0;
        if (learnt.size() > 1) {
            size_t max_i = 1;
            for (size_t i = 2; i < learnt.size(); ++i)
                if (levels_[lit_var(learnt[i])] > levels_[lit_var(learnt[max_i])]) max_i = i;
            std::swap(learnt[1], learnt[max_i]);
            bj = levels_[lit_var(learnt[1])];
        }
        return {std::move(learnt), bj};
    }

    // Returns false when the conflict proves unsatisfiability.
    bool handle_conflict(const std::vector<Lit>& conflict_lits) {
        int max_level = 0;
        for (Lit l : conflict_lits) max_level = std::max(max_level, levels_[lit_var(l)]);
        if (max_level == 0) return false;
        if (max_level < current_level()) backtrack(max_level);
        auto [learnt, bj] = analyze(conflict_lits);
        backtrack(bj);
        if (learnt.size() == 1) {
            enqueue(learnt[0], kNoReason);
        } else {
            int ci = attach_clause(learnt, true);
            clauses_[ci].activity = clause_inc_;
            enqueue(learnt[0], ci);
        }
        var_inc_ /= 0.95;
        clause_inc_ /= 0.999;
        ++conflicts_;
        return true;
    }

    // ---- decision heuristic: indexed binary max-heap over activity ----
    void heap_insert(int v) {
        if (static_cast<int>(heap_pos_.size()) <= v) heap_pos_.resize(v + 1, -1);
        if (heap_pos_[v] >= 0) return;
        heap_pos_[v] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        heap_up(heap_pos_[v]);
    }
    void heap_up(int i) {
        int v = heap_[i];
        while (i > 0) {
            int p = (i - 1) / 2;
            if (activities_[heap_[p]] >= activities_[v]) break;
            heap_[i] = heap_[p];
            heap_pos_[heap_[i]] = i;
            i = p;
        }
        heap_[i] = v;
        heap_pos_[v] = i;
    }
    void heap_down(int i) {
        int v = heap_[i];
        int n = static_cast<int>(heap_.size());
        for (;;) {
            int l = 2 * i + 1, r = 2 * i + 2;
            int best = -1;
            double best_act = activities_[v];
            if (l < n && activities_[heap_[l]] > best_act) {
                best = l;
                best_act = activities_[heap_[l]];
            }
            if (r < n && activities_[heap_[r]] > best_act) best = r;
            if (best < 0) break;
            heap_[i] = heap_[best];
            heap_pos_[heap_[i]] = i;
            i = best;
        }
        heap_[i] = v;
        heap_pos_[v] = i;
    }
    int heap_pop() {
        int v = heap_[0];
        heap_pos_[v] = -1;
        heap_[0] = heap_.back();
        heap_.pop_back();
        if (!heap_.empty()) {
            heap_pos_[heap_[0]] = 0;
            heap_down(0);
        }
        return v;
    }
    int pick_branch_var() {
        while (!heap_.empty()) {
            int v = heap_pop();
            if (values_[v] == kUndef) return v;
        }
        return -1;
    }

    // ---- learnt DB reduction (call at level 0 only) ----
    void reduce_learnts() {
        std::vector<int> ids;
        for (int i = 0; i < static_cast<int>(clauses_.size()); ++i)
            if (clauses_[i].learnt) ids.push_back(i);
        if (ids.size() < 100) return;
        std::sort(ids.begin(), ids.end(),
                  [&](int a, int b) { return clauses_[a].activity < clauses_[b].activity; });
        std::vector<bool> drop(clauses_.size(), false);
        for (size_t i = 0; i < ids.size() / 2; ++i) drop[ids[i]] = true;
        std::vector<Clause> next;
        next.reserve(clauses_.size());
        total_lits_ = 0;
        for (int i = 0; i < static_cast<int>(clauses_.size()); ++i) {
            if (drop[i]) continue;
            total_lits_ += clauses_[i].lits.size();
            next.push_back(std::move(clauses_[i]));
        }
        clauses_ = std::move(next);
        for (auto& w : watches_) w.clear();
        for (int i = 0; i < static_cast<int>(clauses_.size()); ++i) {
            watches_[clauses_[i].lits[0]].push_back(i);
            watches_[clauses_[i].lits[1]].push_back(i);
        }
        max_learnts_ = max_learnts_ * 11 / 10;
    }

    static long long luby(long long i) {
        for (;;) {
            long long k = 1;
            while ((1LL << k) - 1 < i) ++k;
            if ((1LL << k) - 1 == i) return 1LL << (k - 1);
            i -= (1LL << (k - 1)) - 1;
        }
    }

    bool out_of_budget() const {
        if (deadline_ && Clock::now() > *deadline_) return true;
        if (memory_budget_lits_ && total_lits_ > *memory_budget_lits_) return true;
        return false;
    }

    // Enqueues pending level-0 units; false on immediate contradiction.
    bool flush_pending_units() {
        for (Lit u : pending_units_) {
            if (value_lit(u) == kFalse) {
                unsat_flag_ = true;
                return false;
            }
            if (value_lit(u) == kUndef) enqueue(u, kNoReason);
        }
        pending_units_.clear();
        return true;
    }

    CheckResult solve() {
        if (unsat_flag_) return CheckResult::Unsat;
        backtrack(0);
        if (!flush_pending_units()) return CheckResult::Unsat;

        long long conflicts_at_restart = conflicts_;
        long long restart_count = 0;
        long long restart_limit = 128 * luby(++restart_count);
        long long ticks = 0;
        long long int_cuts = 0;

        for (;;) {
            int confl = propagate();
            if (confl >= 0) {
                clauses_[confl].activity += clause_inc_;
                if (!handle_conflict(clauses_[confl].lits)) return CheckResult::Unsat;
                if (++ticks % 64 == 0 && out_of_budget()) return CheckResult::Unknown;
                if (conflicts_ - conflicts_at_restart >= restart_limit) {
                    backtrack(0);
                    conflicts_at_restart = conflicts_;
                    restart_limit = 128 * luby(++restart_count);
                    if (learnt_count() > max_learnts_) reduce_learnts();
                }
                continue;
            }
            auto tcf = theory_sync();
            if (tcf) {
                std::vector<Lit> clause;
                clause.reserve(tcf->reasons.size());
                for (Lit r : tcf->reasons) clause.push_back(lit_neg(r));
                if (!handle_conflict(clause)) return CheckResult::Unsat;
                if (++ticks % 64 == 0 && out_of_budget()) return CheckResult::Unknown;
                continue;
            }
            if (out_of_budget()) return CheckResult::Unknown;
            int next = pick_branch_var();
            if (next < 0) {
                // Full boolean assignment, theory feasible. Split fractional
                // integer columns until the model is integral.
                std::vector<Rational> vals = simplex_.concrete_values();
                int frac_col = -1;
                for (int c = 0; c < simplex_.num_cols(); ++c) {
                    if (simplex_.is_int(c) && !vals[c].is_integer()) {
                        frac_col = c;
                        break;
                    }
                }
                if (frac_col < 0) {
                    build_model(vals);
                    return CheckResult::Sat;
                }
                if (++int_cuts > 20000) return CheckResult::Unknown;
                long long fl = vals[frac_col].floor();
                Lit le_fl = atom_lit(frac_col, DeltaRat{Rational(fl), Rational(0)});
                Lit lt_next = atom_lit(frac_col, DeltaRat{Rational(fl + 1), Rational(-1)});
                backtrack(0);
                add_clause_raw({le_fl, lit_neg(lt_next)});  // x <= fl or x >= fl+1
                if (unsat_flag_ || !flush_pending_units()) return CheckResult::Unsat;
                continue;
            }
            new_decision_level();
            bool phase = phases_[next];
            if (rng_() % 128 == 0) phase = rng_() % 2 == 0;
            enqueue(mk_lit(next, !phase), kNoReason);
        }
    }

    long long learnt_count() const {
        long long n = 0;
        for (const Clause& c : clauses_)
            if (c.learnt) ++n;
        return n;
    }

    void build_model(const std::vector<Rational>& simplex_vals) {
        model_ = SolverModel{};
        model_.bools.resize(values_.size(), 0);
        for (size_t v = 0; v < values_.size(); ++v)
            model_.bools[v] = values_[v] == kTrue ? 1 : 0;
        model_.nums.clear();
        model_.nums.reserve(num_cols_.size());
        for (int col : num_cols_) model_.nums.push_back(simplex_vals[col]);
    }

    // ---- Tseitin compilation ----
    struct AtomInfo {
        int col;
        DeltaRat bound;  // atom true <=> col <= bound
    };

    struct ExprKeyHash {
        size_t operator()(const std::vector<std::pair<int, Rational>>& key) const {
            size_t h = 1469598103934665603ULL;
            for (const auto& [v, c] : key) {
                h = (h ^ static_cast<size_t>(v)) * 1099511628211ULL;
                h = (h ^ static_cast<size_t>(c.num())) * 1099511628211ULL;
                h = (h ^ static_cast<size_t>(c.den())) * 1099511628211ULL;
            }
            return h;
        }
    };

    int slack_for(const std::vector<std::pair<int, Rational>>& terms) {
        if (terms.size() == 1 && terms[0].second == Rational(1)) return terms[0].first;
        auto it = slack_cache_.find(terms);
        if (it != slack_cache_.end()) return it->second;
        int s = simplex_.new_col(false);
        simplex_.define_slack(s, terms);
        slack_cache_.emplace(terms, s);
        return s;
    }

    Lit atom_lit(int col, const DeltaRat& bound) {
        AtomKey key{col, bound.r.num(), bound.r.den(), bound.k.num(), bound.k.den()};
        auto it = atom_cache_.find(key);
        if (it != atom_cache_.end()) return mk_lit(it->second, false);
        int v = new_var();
        int atom_id = static_cast<int>(atoms_.size());
        atoms_.push_back(AtomInfo{col, bound});
        atom_of_var_[v] = atom_id;
        atom_cache_.emplace(key, v);
        return mk_lit(v, false);
    }

    // Compiles a non-equality comparison into a single literal.
    Lit compile_cmp(const LinearExpr& lhs, CmpOp op, const Rational& rhs) {
        Rational c = rhs - lhs.constant();
        std::vector<std::pair<int, Rational>> terms;
        terms.reserve(lhs.terms().size());
        for (const auto& [v, coeff] : lhs.terms()) terms.push_back({num_cols_[v], coeff});
        Rational lead = terms[0].second;
        for (auto& [v, coeff] : terms) coeff = coeff / lead;
        c = c / lead;
        if (lead.sign() < 0) {
            switch (op) {
                case CmpOp::Lt: op = CmpOp::Gt; break;
                case CmpOp::Le: op = CmpOp::Ge; break;
                case CmpOp::Ge: op = CmpOp::Le; break;
                case CmpOp::Gt: op = CmpOp::Lt; break;
                default: break;
            }
        }
        int col = slack_for(terms);
        switch (op) {
            case CmpOp::Le: return atom_lit(col, DeltaRat{c, Rational(0)});
            case CmpOp::Lt: return atom_lit(col, DeltaRat{c, Rational(-1)});
            case CmpOp::Ge: return lit_neg(atom_lit(col, DeltaRat{c, Rational(-1)}));
            case CmpOp::Gt: return lit_neg(atom_lit(col, DeltaRat{c, Rational(0)}));
            default: throw SolverContractError("equality must be split before compile_cmp");
        }
    }

    Lit compile(const Formula& f) {
        switch (f->kind) {
            case FKind::True: return mk_lit(true_var_, false);
            case FKind::False: return mk_lit(true_var_, true);
            case FKind::Var: return mk_lit(f->var.id, false);
            case FKind::Not: return lit_neg(compile(f->kids[0]));
            default: break;
        }
        auto it = compile_cache_.find(f.get());
        if (it != compile_cache_.end()) return it->second;
        Lit out;
        switch (f->kind) {
            case FKind::Cmp: {
                if (f->op == CmpOp::Eq) {
                    Lit le = compile_cmp(f->lhs, CmpOp::Le, f->rhs);
                    Lit ge = compile_cmp(f->lhs, CmpOp::Ge, f->rhs);
                    int x = new_var();
                    Lit lx = mk_lit(x, false);
                    add_clause_raw({lit_neg(lx), le});
                    add_clause_raw({lit_neg(lx), ge});
                    add_clause_raw({lx, lit_neg(le), lit_neg(ge)});
                    out = lx;
                } else {
                    out = compile_cmp(f->lhs, f->op, f->rhs);
                }
                break;
            }
            case FKind::And: {
                int x = new_var();
                Lit lx = mk_lit(x, false);
                std::vector<Lit> big{lx};
                for (const auto& k : f->kids) {
                    Lit lk = compile(k);
                    add_clause_raw({lit_neg(lx), lk});
                    big.push_back(lit_neg(lk));
                }
                add_clause_raw(std::move(big));
                out = lx;
                break;
            }
            case FKind::Or: {
                int x = new_var();
                Lit lx = mk_lit(x, false);
                std::vector<Lit> big{lit_neg(lx)};
                for (const auto& k : f->kids) {
                    Lit lk = compile(k);
                    add_clause_raw({lx, lit_neg(lk)});
                    big.push_back(lk);
                }
                add_clause_raw(std::move(big));
                out = lx;
                break;
            }
            case FKind::Implies: {
                Lit a = compile(f->kids[0]);
                Lit b = compile(f->kids[1]);
                int x = new_var();
                Lit lx = mk_lit(x, false);
                add_clause_raw({lit_neg(lx), lit_neg(a), b});
                add_clause_raw({lx, a});
                add_clause_raw({lx, lit_neg(b)});
                out = lx;
                break;
            }
            case FKind::Iff: {
                Lit a = compile(f->kids[0]);
                Lit b = compile(f->kids[1]);
                int x = new_var();
                Lit lx = mk_lit(x, false);
                add_clause_raw({lit_neg(lx), lit_neg(a), b});
                add_clause_raw({lit_neg(lx), a, lit_neg(b)});
                add_clause_raw({lx, a, b});
                add_clause_raw({lx, lit_neg(a), lit_neg(b)});
                out = lx;
                break;
            }
            default: throw SolverContractError("unreachable formula kind");
        }
        compile_cache_.emplace(f.get(), out);
        return out;
    }

    void assert_root(const Formula& f) {
        switch (f->kind) {
            case FKind::True: return;
            case FKind::False: unsat_flag_ = true; return;
            case FKind::And:
                for (const auto& k : f->kids) assert_root(k);
                return;
            case FKind::Or: {
                std::vector<Lit> clause;
                clause.reserve(f->kids.size());
                for (const auto& k : f->kids) clause.push_back(compile(k));
                add_clause_raw(std::move(clause));
                return;
            }
            case FKind::Implies:
                add_clause_raw({lit_neg(compile(f->kids[0])), compile(f->kids[1])});
                return;
            case FKind::Cmp:
                if (f->op == CmpOp::Eq) {
                    add_clause_raw({compile_cmp(f->lhs, CmpOp::Le, f->rhs)});
                    add_clause_raw({compile_cmp(f->lhs, CmpOp::Ge, f->rhs)});
                    return;
                }
                add_clause_raw({compile(f)});
                return;
            default:
                add_clause_raw({compile(f)});
                return;
        }
    }

    // ---- state ----
    Simplex simplex_;
    std::vector<int> num_cols_;  // NumVar id -> simplex col

    std::vector<signed char> values_;
    std::vector<int> levels_;
    std::vector<int> reasons_;
    std::vector<double> activities_;
    std::vector<bool> phases_;
    std::vector<int> atom_of_var_;
    std::vector<std::vector<int>> watches_;  // indexed by literal
    std::vector<Clause> clauses_;
    std::vector<Lit> trail_;
    std::vector<size_t> level_marks_;
    std::vector<Lit> pending_units_;
    std::vector<long long> seen_;
    long long seen_stamp_ = 0;
    size_t prop_head_ = 0;
    size_t theory_head_ = 0;
    bool unsat_flag_ = false;

    std::vector<int> heap_;
    std::vector<int> heap_pos_;
    double var_inc_ = 1.0;
    double clause_inc_ = 1.0;
    long long conflicts_ = 0;
    long long max_learnts_ = 8000;
    size_t total_lits_ = 0;

    std::vector<AtomInfo> atoms_;
    using AtomKey = std::tuple<int, long long, long long, long long, long long>;
    std::map<AtomKey, int> atom_cache_;
    std::unordered_map<std::vector<std::pair<int, Rational>>, int, ExprKeyHash> slack_cache_;
    std::unordered_map<const FormulaNode*, Lit> compile_cache_;

    std::vector<Formula> assertions_;
    std::optional<CheckResult> last_result_;
    SolverModel model_;
    std::optional<Clock::time_point> deadline_;
    std::optional<size_t> memory_budget_lits_;
    int true_var_;
    std::mt19937 rng_;
};

}  // namespace

std::unique_ptr<Session> make_internal_session(const SolverConfig& cfg) {
    return std::make_unique<InternalSession>(cfg);
}

int first_violated_assertion(const Session& session, const SolverModel& model) {
    const auto& as = session.assertions();
    for (int i = 0; i < static_cast<int>(as.size()); ++i)
        if (!evaluate(as[i], model)) return i;
    return -1;
}

}  // namespace bplan::solver
