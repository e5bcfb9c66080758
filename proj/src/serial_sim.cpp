#include "tugemm/serial_sim.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace tugemm {

namespace {

// One loadable counter bank (the M column counters or the P row counters)
// with per-line unary-signal bookkeeping. Lines are asserted while the count
// is nonzero; loads and tick-to-zero edges are where assertion can change.
// A counter loaded on the same edge it would reach zero never registers the
// transient zero (load wins), so its line does not glitch.
struct CounterBank {
    std::vector<std::int64_t> count;
    std::vector<std::uint8_t> neg;     // sign flag latched at load
    std::vector<std::uint8_t> line;    // unary signal state
    std::vector<std::uint32_t> active; // indices with nonzero count
    std::vector<std::uint64_t> loads;  // per line
    std::vector<std::uint64_t> trans;  // per line

    explicit CounterBank(std::size_t n)
        : count(n, 0), neg(n, 0), line(n, 0), loads(n, 0), trans(n, 0) {
        active.reserve(n);
    }

    void set_line(std::size_t i, bool asserted) {
        if (static_cast<bool>(line[i]) != asserted) {
            line[i] = asserted;
            ++trans[i];
        }
    }

    void load(std::size_t i, std::int64_t v) {
        count[i] = v;
        neg[i] = v < 0;
        ++loads[i];
        set_line(i, v != 0);
    }

    void rebuild_active() {
        active.clear();
        for (std::size_t i = 0; i < count.size(); ++i) {
            if (count[i] != 0) active.push_back(static_cast<std::uint32_t>(i));
        }
    }

    // True iff every nonzero counter is one update away from zero, i.e. all
    // counters reach zero on this edge.
    bool all_reach_zero() const {
        for (std::uint32_t i : active) {
            if (count[i] != 1 && count[i] != -1) return false;
        }
        return true;
    }

    // Drain remaining counts and deassert lines (end of run).
    void drain() {
        for (std::uint32_t i : active) {
            count[i] = 0;
            set_line(i, false);
        }
        active.clear();
    }

    void accumulate(ActivityStats& act) const {
        for (std::size_t i = 0; i < count.size(); ++i) {
            act.counter_loads += loads[i];
            act.unary_signal_transitions += trans[i];
            if (trans[i] > 2 * loads[i]) act.transition_bound_ok = false;
        }
    }
};

class SerialEngine {
public:
    SerialEngine(const GemmProblem& problem, const SerialOptions& options, SerialProbe* probe)
        : p_(problem),
          opt_(options),
          probe_(probe),
          m_(problem.m()),
          n_(problem.n()),
          pdim_(problem.p()),
          cols_(m_),
          rows_(pdim_),
          cells_(problem.c.data().begin(), problem.c.data().end()) {}

    SimResult run() {
        if (probe_) {
            probe_->per_step_cycles.clear();
            probe_->cell_increments.assign(m_ * pdim_, 0);
            probe_->cell_decrements.assign(m_ * pdim_, 0);
        }
        if (opt_.trace) emit_trace_header();
        load_step(0);
        while (!finished_) tick();

        SimResult result{Matrix(m_, pdim_, std::move(cells_)), cycle_, ActivityStats{}};
        result.activity.output_cell_updates = updates_;
        cols_.accumulate(result.activity);
        rows_.accumulate(result.activity);
        return result;
    }

private:
    void load_step(std::size_t i) {
        step_ = i;
        for (std::size_t r = 0; r < m_; ++r) cols_.load(r, p_.a.at(r, i));
        for (std::size_t q = 0; q < pdim_; ++q) rows_.load(q, p_.b.at(i, q));
        cols_.rebuild_active();
        rows_.rebuild_active();
    }

    void reload_rows() {
        for (std::size_t q = 0; q < pdim_; ++q) rows_.load(q, p_.b.at(step_, q));
        rows_.rebuild_active();
    }

    void update_cells() {
        const bool fault = opt_.fault_invert_sign;
        const bool bounded = opt_.policy.is_bounded();
        const std::int64_t lo = bounded ? opt_.policy.min_value() : 0;
        const std::int64_t hi = bounded ? opt_.policy.max_value() : 0;
        for (std::uint32_t m : cols_.active) {
            std::int64_t* cell_row = cells_.data() + static_cast<std::size_t>(m) * pdim_;
            const bool cneg = cols_.neg[m];
            for (std::uint32_t q : rows_.active) {
                const bool same_sign = cneg == static_cast<bool>(rows_.neg[q]);
                const std::int64_t delta = (same_sign != fault) ? 1 : -1;
                cell_row[q] += delta;
                if (bounded && (cell_row[q] < lo || cell_row[q] > hi)) {
                    throw OverflowError(m, q, cycle_, cell_row[q], opt_.policy.bits);
                }
                if (probe_) {
                    auto& tally = delta > 0 ? probe_->cell_increments : probe_->cell_decrements;
                    ++tally[static_cast<std::size_t>(m) * pdim_ + q];
                }
            }
        }
        updates_ += static_cast<std::uint64_t>(cols_.active.size()) * rows_.active.size();
    }

    void finish_step() {
        if (probe_) {
            probe_->per_step_cycles.push_back(cycle_ - step_start_cycle_);
        }
        step_start_cycle_ = cycle_;
        if (step_ + 1 < n_) {
            load_step(step_ + 1);  // loads land on this edge; drained values never register
        } else {
            cols_.drain();
            rows_.drain();
            finished_ = true;
        }
    }

    void tick() {
        ++cycle_;
        if (opt_.trace) emit_trace_row();
        update_cells();

        if (rows_.all_reach_zero()) {
            // Row pass complete: column counters update by one toward zero on
            // this edge; rows reload (or get the next step's values).
            std::size_t kept = 0;
            for (std::uint32_t m : cols_.active) {
                cols_.count[m] += cols_.count[m] > 0 ? -1 : 1;
                if (cols_.count[m] != 0) {
                    cols_.active[kept++] = m;
                } else {
                    cols_.set_line(m, false);
                }
            }
            cols_.active.resize(kept);
            if (kept == 0) {
                finish_step();
            } else {
                reload_rows();
            }
        } else if (cols_.active.empty()) {
            // Zero column vector: step_done needs no row activity; one
            // control cycle and the index counter moves on. Row registers
            // are overwritten by the next loads on this same edge.
            finish_step();
        } else {
            std::size_t kept = 0;
            for (std::uint32_t q : rows_.active) {
                rows_.count[q] += rows_.count[q] > 0 ? -1 : 1;
                if (rows_.count[q] != 0) {
                    rows_.active[kept++] = q;
                } else {
                    rows_.set_line(q, false);
                }
            }
            rows_.active.resize(kept);
        }
    }

    void emit_trace_header() {
        std::ostream& out = *opt_.trace;
        out << "cycle,step,enabled";
        for (std::size_t r = 0; r < m_; ++r) out << ",c" << r;
        for (std::size_t q = 0; q < pdim_; ++q) out << ",r" << q;
        out << '\n';
    }

    void emit_trace_row() {
        std::ostream& out = *opt_.trace;
        out << cycle_ << ',' << step_ << ','
            << static_cast<std::uint64_t>(cols_.active.size()) * rows_.active.size();
        for (std::int64_t v : cols_.count) out << ',' << v;
        for (std::int64_t v : rows_.count) out << ',' << v;
        out << '\n';
    }

    const GemmProblem& p_;
    const SerialOptions& opt_;
    SerialProbe* probe_;
    std::size_t m_, n_, pdim_;
    CounterBank cols_;
    CounterBank rows_;
    std::vector<std::int64_t> cells_;
    std::size_t step_ = 0;
    std::uint64_t cycle_ = 0;
    std::uint64_t step_start_cycle_ = 0;
    std::uint64_t updates_ = 0;
    bool finished_ = false;
};

}  // namespace

SimResult serial_run(const GemmProblem& problem, const SerialOptions& options,
                     SerialProbe* probe) {
    require_valid(problem);
    if (options.policy.is_bounded() && options.policy.bits < problem.width.bits()) {
        throw std::invalid_argument("fixed output width must be >= operand width");
    }
    SerialEngine engine(problem, options, probe);
    return engine.run();
}

LatencyBreakdown serial_step_trace(const GemmProblem& problem) {
    SerialProbe probe;
    serial_run(problem, SerialOptions{}, &probe);
    return LatencyBreakdown::from_steps(std::move(probe.per_step_cycles));
}

}  // namespace tugemm
