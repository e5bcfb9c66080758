#include "tugemm/parallel_sim.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace tugemm {

namespace {

// One vector counter: a private copy of the column/row counter pair for step
// i, running the same nested semantics as the serial banks. Load-wins and
// line bookkeeping mirror serial_sim's CounterBank; they are kept per unit
// because the parallel design replicates the signal sets N times.
struct VectorCounter {
    std::vector<std::int64_t> col_count, row_count;
    std::vector<std::uint8_t> col_neg, row_neg;
    std::vector<std::uint8_t> col_line, row_line;
    std::vector<std::uint32_t> active_cols, active_rows;
    std::vector<std::uint64_t> col_loads, col_trans, row_loads, row_trans;
    bool done = false;

    VectorCounter(const GemmProblem& p, std::size_t step)
        : col_count(p.m()), row_count(p.p()),
          col_neg(p.m(), 0), row_neg(p.p(), 0),
          col_line(p.m(), 0), row_line(p.p(), 0),
          col_loads(p.m(), 0), col_trans(p.m(), 0),
          row_loads(p.p(), 0), row_trans(p.p(), 0) {
        for (std::size_t r = 0; r < p.m(); ++r) load_col(r, p.a.at(r, step));
        load_rows(p, step);
        for (std::size_t r = 0; r < p.m(); ++r) {
            if (col_count[r] != 0) active_cols.push_back(static_cast<std::uint32_t>(r));
        }
    }

    void load_col(std::size_t i, std::int64_t v) {
        col_count[i] = v;
        col_neg[i] = v < 0;
        ++col_loads[i];
        set_col_line(i, v != 0);
    }

    void load_rows(const GemmProblem& p, std::size_t step) {
        for (std::size_t q = 0; q < p.p(); ++q) {
            const std::int64_t v = p.b.at(step, q);
            row_count[q] = v;
            row_neg[q] = v < 0;
            ++row_loads[q];
            set_row_line(q, v != 0);
        }
        active_rows.clear();
        for (std::size_t q = 0; q < row_count.size(); ++q) {
            if (row_count[q] != 0) active_rows.push_back(static_cast<std::uint32_t>(q));
        }
    }

    void set_col_line(std::size_t i, bool asserted) {
        if (static_cast<bool>(col_line[i]) != asserted) {
            col_line[i] = asserted;
            ++col_trans[i];
        }
    }

    void set_row_line(std::size_t i, bool asserted) {
        if (static_cast<bool>(row_line[i]) != asserted) {
            row_line[i] = asserted;
            ++row_trans[i];
        }
    }

    bool rows_all_reach_zero() const {
        for (std::uint32_t q : active_rows) {
            if (row_count[q] != 1 && row_count[q] != -1) return false;
        }
        return true;
    }

    // Finished units contribute 0 and deassert their unary lines.
    void finish() {
        for (std::uint32_t q : active_rows) {
            row_count[q] = 0;
            set_row_line(q, false);
        }
        active_rows.clear();
        done = true;
    }

    void accumulate(ActivityStats& act) const {
        for (std::size_t i = 0; i < col_count.size(); ++i) {
            act.counter_loads += col_loads[i];
            act.unary_signal_transitions += col_trans[i];
            if (col_trans[i] > 2 * col_loads[i]) act.transition_bound_ok = false;
        }
        for (std::size_t i = 0; i < row_count.size(); ++i) {
            act.counter_loads += row_loads[i];
            act.unary_signal_transitions += row_trans[i];
            if (row_trans[i] > 2 * row_loads[i]) act.transition_bound_ok = false;
        }
    }
};

class ParallelEngine {
public:
    ParallelEngine(const GemmProblem& problem, const ParallelOptions& options,
                   std::optional<std::size_t> traced_cell)
        : p_(problem),
          opt_(options),
          traced_cell_(traced_cell),
          m_(problem.m()),
          n_(problem.n()),
          pdim_(problem.p()),
          cells_(problem.c.data().begin(), problem.c.data().end()) {
        units_.reserve(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            units_.emplace_back(p_, i);
            active_units_.push_back(i);
        }
        if (opt_.policy.is_bounded()) {
            touch_cycle_.assign(m_ * pdim_, 0);
        }
        if (traced_cell_) {
            traced_prev_ = cells_[*traced_cell_];
        }
    }

    SimResult run() {
        if (opt_.trace) emit_trace_header();
        while (!active_units_.empty()) tick();

        SimResult result{Matrix(m_, pdim_, std::move(cells_)), cycle_, ActivityStats{}};
        result.activity.output_cell_updates = updates_;
        for (const VectorCounter& u : units_) u.accumulate(result.activity);
        return result;
    }

    std::vector<std::int64_t> take_cell_trace() { return std::move(cell_trace_); }

private:
    void apply_unit_contributions(VectorCounter& u) {
        const bool bounded = opt_.policy.is_bounded();
        for (std::uint32_t m : u.active_cols) {
            std::int64_t* cell_row = cells_.data() + static_cast<std::size_t>(m) * pdim_;
            const bool cneg = u.col_neg[m];
            for (std::uint32_t q : u.active_rows) {
                cell_row[q] += (cneg == static_cast<bool>(u.row_neg[q])) ? 1 : -1;
                if (bounded) {
                    const std::size_t idx = static_cast<std::size_t>(m) * pdim_ + q;
                    if (touch_cycle_[idx] != cycle_) {
                        touch_cycle_[idx] = cycle_;
                        touched_.push_back(idx);
                    }
                }
            }
        }
        updates_ += static_cast<std::uint64_t>(u.active_cols.size()) * u.active_rows.size();
    }

    // Advance one unit's counters for this cycle; returns true when its
    // col_done goes up on this edge.
    bool advance_unit(VectorCounter& u) {
        if (u.rows_all_reach_zero()) {
            std::size_t kept = 0;
            for (std::uint32_t m : u.active_cols) {
                u.col_count[m] += u.col_count[m] > 0 ? -1 : 1;
                if (u.col_count[m] != 0) {
                    u.active_cols[kept++] = m;
                } else {
                    u.set_col_line(m, false);
                }
            }
            u.active_cols.resize(kept);
            if (kept == 0) {
                u.finish();
                return true;
            }
            u.load_rows(p_, unit_step(u));
            return false;
        }
        if (u.active_cols.empty()) {
            u.finish();
            return true;
        }
        std::size_t kept = 0;
        for (std::uint32_t q : u.active_rows) {
            u.row_count[q] += u.row_count[q] > 0 ? -1 : 1;
            if (u.row_count[q] != 0) {
                u.active_rows[kept++] = q;
            } else {
                u.set_row_line(q, false);
            }
        }
        u.active_rows.resize(kept);
        return false;
    }

    std::size_t unit_step(const VectorCounter& u) const {
        return static_cast<std::size_t>(&u - units_.data());
    }

    void tick() {
        ++cycle_;
        if (opt_.trace) emit_trace_row();

        for (std::size_t i : active_units_) apply_unit_contributions(units_[i]);

        if (opt_.policy.is_bounded()) {
            // The adder tree is combinational; the register is checked on
            // its end-of-cycle value, not on intermediate partial sums.
            const std::int64_t lo = opt_.policy.min_value();
            const std::int64_t hi = opt_.policy.max_value();
            for (std::size_t idx : touched_) {
                if (cells_[idx] < lo || cells_[idx] > hi) {
                    throw OverflowError(idx / pdim_, idx % pdim_, cycle_, cells_[idx],
                                        opt_.policy.bits);
                }
            }
            touched_.clear();
        }
        if (traced_cell_) {
            cell_trace_.push_back(cells_[*traced_cell_] - traced_prev_);
            traced_prev_ = cells_[*traced_cell_];
        }

        std::size_t kept = 0;
        for (std::size_t i : active_units_) {
            if (!advance_unit(units_[i])) active_units_[kept++] = i;
        }
        active_units_.resize(kept);
    }

    void emit_trace_header() {
        std::ostream& out = *opt_.trace;
        out << "cycle,enabled";
        for (std::size_t i = 0; i < n_; ++i) out << ",done" << i;
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t r = 0; r < m_; ++r) out << ",u" << i << "_c" << r;
            for (std::size_t q = 0; q < pdim_; ++q) out << ",u" << i << "_r" << q;
        }
        out << '\n';
    }

    void emit_trace_row() {
        std::ostream& out = *opt_.trace;
        std::uint64_t enabled = 0;
        for (std::size_t i : active_units_) {
            enabled += static_cast<std::uint64_t>(units_[i].active_cols.size()) *
                       units_[i].active_rows.size();
        }
        out << cycle_ << ',' << enabled;
        for (const VectorCounter& u : units_) out << ',' << (u.done ? 1 : 0);
        for (const VectorCounter& u : units_) {
            for (std::int64_t v : u.col_count) out << ',' << v;
            for (std::int64_t v : u.row_count) out << ',' << v;
        }
        out << '\n';
    }

    const GemmProblem& p_;
    const ParallelOptions& opt_;
    std::optional<std::size_t> traced_cell_;
    std::size_t m_, n_, pdim_;
    std::vector<std::int64_t> cells_;
    std::vector<VectorCounter> units_;
    std::vector<std::size_t> active_units_;
    std::vector<std::uint64_t> touch_cycle_;
    std::vector<std::size_t> touched_;
    std::vector<std::int64_t> cell_trace_;
    std::int64_t traced_prev_ = 0;
    std::uint64_t cycle_ = 0;
    std::uint64_t updates_ = 0;
};

}  // namespace

SimResult parallel_run(const GemmProblem& problem, const ParallelOptions& options) {
    require_valid(problem);
    if (options.policy.is_bounded() && options.policy.bits < problem.width.bits()) {
        throw std::invalid_argument("fixed output width must be >= operand width");
    }
    ParallelEngine engine(problem, options, std::nullopt);
    return engine.run();
}

std::vector<std::int64_t> parallel_cell_trace(const GemmProblem& problem, std::size_t m,
                                              std::size_t q) {
    require_valid(problem);
    if (m >= problem.m() || q >= problem.p()) {
        throw std::out_of_range("cell index (" + std::to_string(m) + "," + std::to_string(q) +
                                ") out of bounds for " + std::to_string(problem.m()) + "x" +
                                std::to_string(problem.p()) + " output");
    }
    ParallelOptions options;
    ParallelEngine engine(problem, options, m * problem.p() + q);
    engine.run();
    return engine.take_cell_trace();
}

}  // namespace tugemm
