// Exact 0-1 solvers: depth-first branch-and-bound with constraint
// propagation for production use, and an exhaustive enumerator kept as an
// independent verification oracle.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "d2dsim/rrm.hpp"

namespace d2d {

double objective_value(const BinaryProgram& program,
                       std::span<const uint8_t> values) {
    double obj = 0.0;
    for (int v = 0; v < program.num_vars(); ++v) {
        if (values[static_cast<size_t>(v)]) {
            obj += program.objective[static_cast<size_t>(v)];
        }
    }
    return obj;
}

bool satisfies(const BinaryProgram& program, std::span<const uint8_t> values) {
    if (static_cast<int>(values.size()) != program.num_vars()) return false;
    for (const LinearConstraint& row : program.rows) {
        long lhs = 0;
        for (const TermGroup& g : row.groups) {
            for (const LinearTerm& t : g.terms) {
                lhs += static_cast<long>(t.coeff) *
                       values[static_cast<size_t>(t.var)];
            }
        }
        if (row.sense == LinearConstraint::Sense::LessEq) {
            if (lhs > row.rhs) return false;
        } else {
            if (lhs != row.rhs) return false;
        }
    }
    return true;
}

extern long debug_nodes;
extern double debug_seed_obj;

namespace {

class BranchAndBound {
  public:
    explicit BranchAndBound(const BinaryProgram& p) : p_(p) {
        const int n = p_.num_vars();
        assignment_.assign(static_cast<size_t>(n), -1);
        var_rows_.resize(static_cast<size_t>(n));
        for (size_t r = 0; r < p_.rows.size(); ++r) {
            for (const TermGroup& g : p_.rows[r].groups) {
                for (const LinearTerm& t : g.terms) {
                    auto& rows = var_rows_[static_cast<size_t>(t.var)];
                    if (rows.empty() || rows.back() != static_cast<int>(r)) {
                        rows.push_back(static_cast<int>(r));
                    }
                }
            }
        }
        var_slots_.resize(static_cast<size_t>(n));
        slot_max_.resize(p_.bound_slots.size());
        for (size_t s = 0; s < p_.bound_slots.size(); ++s) {
            auto note_vars = [&](const std::vector<BoundCandidate>& cands) {
                for (const BoundCandidate& c : cands) {
                    for (const PatternFix& f : c.pattern) {
                        auto& slots = var_slots_[static_cast<size_t>(f.var)];
                        if (std::find(slots.begin(), slots.end(),
                                      static_cast<int>(s)) == slots.end()) {
                            slots.push_back(static_cast<int>(s));
                        }
                    }
                }
            };
            note_vars(p_.bound_slots[s].primary);
            note_vars(p_.bound_slots[s].secondary);
            slot_max_[s] = slot_consistent_max(s);
        }
    }

    Solution run() {
        seed_incumbent();
        std::vector<int> queue;
        for (size_t r = 0; r < p_.rows.size(); ++r) {
            queue.push_back(static_cast<int>(r));
        }
        if (propagate(queue)) dfs(0);
        if (!have_best_) {
            throw std::runtime_error("binary program is infeasible");
        }
        return {std::move(best_values_), best_obj_};
    }

  private:
    // Greedy warm start from the slot annotations: walk candidates by
    // descending value and keep each pattern that leaves every row
    // satisfiable. The incumbent it produces only tightens pruning; the
    // lexicographic tie handling in record_leaf keeps the returned optimum
    // independent of the seed.
    void seed_incumbent() {
        if (p_.bound_slots.empty()) return;
        struct Ranked {
            double value;
            const BoundCandidate* cand;
        };
        std::vector<Ranked> ranked;
        for (const BoundSlot& slot : p_.bound_slots) {
            for (const BoundCandidate& c : slot.primary) {
                if (c.value > 0.0) ranked.push_back({c.value, &c});
            }
            for (const BoundCandidate& c : slot.secondary) {
                if (c.value > 0.0) ranked.push_back({c.value, &c});
            }
        }
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const Ranked& a, const Ranked& b) {
                             return a.value > b.value;
                         });

        std::vector<uint8_t> values(static_cast<size_t>(p_.num_vars()), 0);
        std::vector<long> lhs(p_.rows.size(), 0);
        for (const Ranked& r : ranked) {
            bool conflict = false;
            for (const PatternFix& f : r.cand->pattern) {
                if (values[static_cast<size_t>(f.var)] != f.value &&
                    values[static_cast<size_t>(f.var)] == 1) {
                    conflict = true;
                    break;
                }
            }
            if (conflict) continue;
            std::vector<int> touched;
            for (const PatternFix& f : r.cand->pattern) {
                if (f.value == 1 && values[static_cast<size_t>(f.var)] == 0) {
                    touched.push_back(f.var);
                }
            }
            bool ok = true;
            for (int v : touched) {
                values[static_cast<size_t>(v)] = 1;
                for (int row_idx : var_rows_[static_cast<size_t>(v)]) {
                    const LinearConstraint& row =
                        p_.rows[static_cast<size_t>(row_idx)];
                    long sum = 0;
                    for (const TermGroup& g : row.groups) {
                        for (const LinearTerm& t : g.terms) {
                            sum += static_cast<long>(t.coeff) *
                                   values[static_cast<size_t>(t.var)];
                        }
                    }
                    lhs[static_cast<size_t>(row_idx)] = sum;
                    // Unset variables stay zero, so the running LHS is the
                    // final LHS unless a later pattern touches the row.
                    if (row.sense == LinearConstraint::Sense::LessEq
                            ? sum > row.rhs
                            : sum != row.rhs) {
                        ok = false;
                    }
                }
                if (!ok) break;
            }
            if (!ok) {
                for (int v : touched) values[static_cast<size_t>(v)] = 0;
            }
        }
        if (!satisfies(p_, values)) return;
        best_obj_ = objective_value(p_, values);
        debug_seed_obj = best_obj_;
        best_values_ = std::move(values);
        have_best_ = true;
    }

    bool candidate_consistent(const BoundCandidate& c) const {
        for (const PatternFix& f : c.pattern) {
            int8_t a = assignment_[static_cast<size_t>(f.var)];
            if (a != -1 && a != static_cast<int8_t>(f.value)) return false;
        }
        return true;
    }

    // Best achievable value of one cell's slot: at most one primary and
    // one secondary candidate, on distinct entities; empty choices count
    // zero.
    double slot_consistent_max(size_t s) const {
        const BoundSlot& slot = p_.bound_slots[s];
        double sec_best = 0.0;
        int sec_entity = -1;
        double sec_other = 0.0;  // best secondary on a different entity
        for (const BoundCandidate& c : slot.secondary) {
            if (c.value <= 0.0 || !candidate_consistent(c)) continue;
            if (c.value > sec_best) {
                if (c.entity != sec_entity) sec_other = sec_best;
                sec_best = c.value;
                sec_entity = c.entity;
            } else if (c.entity != sec_entity && c.value > sec_other) {
                sec_other = c.value;
            }
        }
        double m = sec_best;
        for (const BoundCandidate& c : slot.primary) {
            if (c.value <= 0.0 || !candidate_consistent(c)) continue;
            double with = c.value +
                          (c.entity == sec_entity ? sec_other : sec_best);
            if (with > m) m = with;
        }
        return m;
    }

    bool fix(int var, int8_t value, std::vector<int>& queue) {
        int8_t& a = assignment_[static_cast<size_t>(var)];
        if (a == value) return true;
        if (a != -1) return false;
        a = value;
        trail_.push_back(var);
        for (int r : var_rows_[static_cast<size_t>(var)]) queue.push_back(r);
        for (int s : var_slots_[static_cast<size_t>(var)]) {
            slot_trail_.push_back({s, slot_max_[static_cast<size_t>(s)]});
            slot_max_[static_cast<size_t>(s)] =
                slot_consistent_max(static_cast<size_t>(s));
        }
        return true;
    }

    void undo(size_t trail_mark, size_t slot_mark) {
        while (trail_.size() > trail_mark) {
            assignment_[static_cast<size_t>(trail_.back())] = -1;
            trail_.pop_back();
        }
        while (slot_trail_.size() > slot_mark) {
            auto [s, old] = slot_trail_.back();
            slot_trail_.pop_back();
            slot_max_[static_cast<size_t>(s)] = old;
        }
    }

    // Group value interval under the current assignment: raw bounds from
    // the free variables, clamped to the interval the builder declared for
    // the feasible set. An empty intersection is a proven dead end.
    struct GroupBounds {
        long lo = 0;
        long hi = 0;
        bool empty = false;
    };

    GroupBounds group_bounds(const TermGroup& g, int skip_var,
                             int8_t skip_value) const {
        long rlo = 0;
        long rhi = 0;
        for (const LinearTerm& t : g.terms) {
            int8_t a = t.var == skip_var ? skip_value
                                         : assignment_[static_cast<size_t>(t.var)];
            if (a == -1) {
                rlo += std::min(0, t.coeff);
                rhi += std::max(0, t.coeff);
            } else {
                rlo += static_cast<long>(a) * t.coeff;
                rhi += static_cast<long>(a) * t.coeff;
            }
        }
        GroupBounds b;
        b.lo = std::max(rlo, static_cast<long>(g.lo));
        b.hi = std::min(rhi, static_cast<long>(g.hi));
        b.empty = b.lo > b.hi;
        return b;
    }

    // Bound propagation over touched rows until fixpoint. Returns false on
    // a proven dead end. Forcing is exact for the builder's rows and sound
    // (merely conservative) for arbitrary coefficients; rows with no free
    // variables are checked exactly.
    bool propagate(std::vector<int>& queue) {
        while (!queue.empty()) {
            int r = queue.back();
            queue.pop_back();
            const LinearConstraint& row = p_.rows[static_cast<size_t>(r)];
            const bool is_eq = row.sense == LinearConstraint::Sense::Eq;

        restart_row:
            long min_lhs = 0;
            long max_lhs = 0;
            group_scratch_.clear();
            for (const TermGroup& g : row.groups) {
                GroupBounds b = group_bounds(g, -1, 0);
                if (b.empty) return false;
                min_lhs += b.lo;
                max_lhs += b.hi;
                group_scratch_.push_back(b);
            }
            if (min_lhs > row.rhs) return false;
            if (is_eq && max_lhs < row.rhs) return false;

            for (size_t gi = 0; gi < row.groups.size(); ++gi) {
                const TermGroup& g = row.groups[gi];
                const GroupBounds& gb = group_scratch_[gi];
                for (const LinearTerm& t : g.terms) {
                    if (assignment_[static_cast<size_t>(t.var)] != -1) continue;
                    bool ok[2];
                    for (int8_t b = 0; b <= 1; ++b) {
                        GroupBounds with = group_bounds(g, t.var, b);
                        ok[b] = !with.empty &&
                                min_lhs - gb.lo + with.lo <= row.rhs &&
                                (!is_eq ||
                                 max_lhs - gb.hi + with.hi >= row.rhs);
                    }
                    if (!ok[0] && !ok[1]) return false;
                    if (ok[0] != ok[1]) {
                        if (!fix(t.var, ok[1] ? 1 : 0, queue)) return false;
                        goto restart_row;
                    }
                }
            }
        }
        return true;
    }

    double bound() const {
        if (!p_.bound_slots.empty()) {
            double b = 0.0;
            for (double m : slot_max_) b += m;
            return b;
        }
        double b = 0.0;
        for (int v = 0; v < p_.num_vars(); ++v) {
            int8_t a = assignment_[static_cast<size_t>(v)];
            if (a == 1) {
                b += p_.objective[static_cast<size_t>(v)];
            } else if (a == -1) {
                b += std::max(0.0, p_.objective[static_cast<size_t>(v)]);
            }
        }
        return b;
    }

    void record_leaf() {
        std::vector<uint8_t> values(assignment_.begin(), assignment_.end());
        double obj = objective_value(p_, values);
        // Leaves arrive in lexicographic order, so replacing on strict
        // improvement or on an equal-objective, lexicographically smaller
        // vector pins the result to the smallest optimum even when the
        // greedy seed supplied a lexicographically later one.
        if (!have_best_ || obj > best_obj_ ||
            (obj == best_obj_ &&
             std::lexicographical_compare(values.begin(), values.end(),
                                          best_values_.begin(),
                                          best_values_.end()))) {
            best_obj_ = obj;
            best_values_ = std::move(values);
            have_best_ = true;
        }
    }

    void dfs(int cursor) {
        ++debug_nodes;
        const int n = p_.num_vars();
        while (cursor < n && assignment_[static_cast<size_t>(cursor)] != -1) {
            ++cursor;
        }
        if (cursor == n) {
            record_leaf();
            return;
        }
        if (have_best_) {
            // The safety margin keeps float rounding in the bound from ever
            // pruning a strictly better completion.
            double eps = 1e-9 * (1.0 + std::abs(best_obj_));
            if (bound() <= best_obj_ - eps) return;
        }
        for (int8_t value = 0; value <= 1; ++value) {
            size_t trail_mark = trail_.size();
            size_t slot_mark = slot_trail_.size();
            std::vector<int> queue;
            if (fix(cursor, value, queue) && propagate(queue)) {
                dfs(cursor + 1);
            }
            undo(trail_mark, slot_mark);
        }
    }

    const BinaryProgram& p_;
    std::vector<int8_t> assignment_;
    std::vector<int> trail_;
    std::vector<std::pair<int, double>> slot_trail_;
    std::vector<std::vector<int>> var_rows_;
    std::vector<std::vector<int>> var_slots_;
    std::vector<double> slot_max_;
    std::vector<GroupBounds> group_scratch_;
    std::vector<uint8_t> best_values_;
    double best_obj_ = -std::numeric_limits<double>::infinity();
    bool have_best_ = false;
};

// Exhaustive enumerator. It reads only the rows' flat linear terms (never
// the group intervals or bound slots), and its prefix pruning discards
// only assignments whose rows are already unsatisfiable, so every feasible
// leaf is visited, in lexicographic order.
class Enumerator {
  public:
    explicit Enumerator(const BinaryProgram& p) : p_(p) {
        values_.assign(static_cast<size_t>(p_.num_vars()), 0);
        for (const LinearConstraint& row : p_.rows) {
            flat_rows_.push_back(row.flat_terms());
        }
    }

    Solution run() {
        enumerate(0);
        if (!have_best_) {
            throw std::runtime_error("binary program is infeasible");
        }
        return {std::move(best_values_), best_obj_};
    }

  private:
    bool prefix_feasible(int fixed_count) const {
        for (size_t r = 0; r < p_.rows.size(); ++r) {
            const LinearConstraint& row = p_.rows[r];
            long min_lhs = 0;
            long max_lhs = 0;
            for (const LinearTerm& t : flat_rows_[r]) {
                if (t.var < fixed_count) {
                    long c = static_cast<long>(t.coeff) *
                             values_[static_cast<size_t>(t.var)];
                    min_lhs += c;
                    max_lhs += c;
                } else {
                    min_lhs += std::min(0, t.coeff);
                    max_lhs += std::max(0, t.coeff);
                }
            }
            if (min_lhs > row.rhs) return false;
            if (row.sense == LinearConstraint::Sense::Eq && max_lhs < row.rhs) {
                return false;
            }
        }
        return true;
    }

    void enumerate(int v) {
        if (!prefix_feasible(v)) return;
        if (v == p_.num_vars()) {
            if (!satisfies(p_, values_)) return;
            double obj = objective_value(p_, values_);
            if (!have_best_ || obj > best_obj_) {
                best_obj_ = obj;
                best_values_ = values_;
                have_best_ = true;
            }
            return;
        }
        values_[static_cast<size_t>(v)] = 0;
        enumerate(v + 1);
        values_[static_cast<size_t>(v)] = 1;
        enumerate(v + 1);
        values_[static_cast<size_t>(v)] = 0;
    }

    const BinaryProgram& p_;
    std::vector<std::vector<LinearTerm>> flat_rows_;
    std::vector<uint8_t> values_;
    std::vector<uint8_t> best_values_;
    double best_obj_ = -std::numeric_limits<double>::infinity();
    bool have_best_ = false;
};

}  // namespace

long debug_nodes = 0;
double debug_seed_obj = 0;

Solution solve_exact(const BinaryProgram& program) {
    return BranchAndBound(program).run();
}

Solution solve_bruteforce(const BinaryProgram& program) {
    if (program.num_vars() > 24) {
        throw std::invalid_argument(
            "brute force enumeration is capped at 24 variables");
    }
    return Enumerator(program).run();
}

}  // namespace d2d
